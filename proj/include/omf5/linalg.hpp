// Exact linear algebra: word-prime Gaussian elimination and charpoly,
// fraction-free determinants, HNF/SNF, integer kernels, and saturated
// rational kernels computed by multi-modular lifting with exact verification.
#pragma once

#include <functional>

#include "omf5/matrix.hpp"
#include "omf5/poly.hpp"

namespace omf5 {

// In-place reduced row echelon form mod p; returns the pivot columns.
std::vector<int> rref_mod(UMat& A, u64 p);
int rank_mod(UMat A, u64 p);
// Columns form the RREF-normalized kernel basis (identity on free rows).
UMat nullspace_mod(const UMat& A, u64 p);

// Characteristic polynomial mod p via Hessenberg reduction; monic,
// little-endian, length n+1.
std::vector<u64> charpoly_mod(UMat A, u64 p);

mpz_class det_bareiss(ZMat A);
inline mpz_class det_mat(const IMat& A) { return det_bareiss(to_z(A)); }

QMat solve_q(QMat A, QMat B);  // A X = B, A square nonsingular
QMat inverse_q(const QMat& A);

// Row-style Hermite normal form (pivots positive, entries above pivots
// reduced); zero rows dropped.
ZMat hnf_rows(ZMat A);
inline ZMat hnf_cols(const ZMat& A) { return hnf_rows(A.transpose()).transpose(); }

// Basis (as columns) of {x in Z^n : A x = 0}; saturated by construction.
ZMat integer_kernel(const ZMat& A);

// Basis (as columns) of the full-rank lattice {x in Z^n : A x = 0 mod m}.
ZMat lattice_kernel_mod(const ZMat& A, const mpz_class& m);

// Elementary divisors d1 | d2 | ... (nonnegative, zero-padded to min(r,c)).
ZVec snf_divisors(ZMat A);

bool rational_reconstruct(const mpz_class& r, const mpz_class& M, mpq_class& out);
mpz_class crt_pair(const mpz_class& r1, const mpz_class& m1, const mpz_class& r2, const mpz_class& m2);
inline mpz_class centered_mod(mpz_class r, const mpz_class& M) {
  r %= M;
  if (r < 0) r += M;
  if (2 * r > M) r -= M;
  return r;
}

// A stream of fixed 62-bit primes used by all multi-modular algorithms.
u64 nth_solver_prime(int i);

// Saturated kernel lattice of A: columns form a basis of ker_Q(A) cap Z^n.
// The generic overload takes the matrix through callbacks so very large
// implicit matrices (polynomials evaluated at a matrix) never materialize:
//   reduce(q) -> the matrix mod q;
//   mulvec(x) -> A x computed exactly.
ZMat nullspace_saturated(const ZMat& A);
ZMat nullspace_saturated_fn(int rows, int cols, const std::function<UMat(u64)>& reduce,
                            const std::function<ZVec(const ZVec&)>& mulvec);

// Saturation of the column span of V (V need not have full column rank).
ZMat saturate_columns(const ZMat& V);

// Characteristic polynomial of M/denom (monic, integral; integrality is a
// theorem for the operators considered here and is asserted).  eig_bound
// must dominate the absolute value of every eigenvalue.
ZPoly charpoly(const ZMat& M, const mpz_class& denom, const mpz_class& eig_bound);
// Max-row-sum bound on |eigenvalues| of M/denom, rounded up.
mpz_class eig_row_bound(const ZMat& M, const mpz_class& denom);

}  // namespace omf5
