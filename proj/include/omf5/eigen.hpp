// Characteristic polynomials of Hecke operators, exact block splitting,
// bounded factor extraction, and mod-ell eigenspace / congruence analysis.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "omf5/hecke.hpp"
#include "omf5/linalg.hpp"
#include "omf5/poly.hpp"

namespace omf5 {

struct CharPoly {
  ZPoly coeffs;            // little-endian, monic
  std::string provenance;  // operator descriptor
};

// Exact characteristic polynomial of M/denom via CRT over solver primes with
// an extra-prime cross-check; the true polynomial must be integral.
CharPoly char_poly(const ZMat& M, const mpz_class& denom = 1, std::string provenance = {});
CharPoly op_charpoly(const HeckeOperator& T);

// True iff the product of the factors equals f exactly.
bool verify_factor_product(const ZPoly& f, const std::vector<ZPoly>& factors);
inline bool verify_factor_product(const CharPoly& f, const std::vector<ZPoly>& factors) {
  return verify_factor_product(f.coeffs, factors);
}

// All integer roots of a monic integer polynomial with multiplicities,
// ascending.  (Rational roots of a monic integer polynomial are integers.)
// Complete: roots are located modulo a solver prime, Newton-lifted past the
// coefficient bound, and certified by exact evaluation.
std::vector<std::pair<mpz_class, int>> rational_roots(const ZPoly& f);

// Saturated integer kernel lattice of f(M/denom) (columns form a basis);
// f must divide the characteristic polynomial exactly.  When the cofactor is
// coprime and smaller than f the kernel is computed as the image of the
// cofactor evaluated at the matrix.
ZMat block_split(const ZMat& M, const mpz_class& denom, const ZPoly& f);
inline ZMat block_split(const HeckeOperator& T, const ZPoly& f) {
  return block_split(T.mat, T.denom, f);
}

// Kernel basis (columns, reduced echelon) of (M/denom - c) over F_ell.
UMat mod_ell_kernel(const ZMat& M, const mpz_class& denom, const mpz_class& c, u64 ell);
inline UMat mod_ell_kernel(const HeckeOperator& T, const mpz_class& c, u64 ell) {
  return mod_ell_kernel(T.mat, T.denom, c, ell);
}

// Integral matrix R with (M/denom)*B = B*(R/denom): the action of the
// operator on the span of B written in the basis B.  B must be saturated
// with full column rank and an (M/denom)-stable span.
ZMat restrict_action(const ZMat& M, const mpz_class& denom, const ZMat& B);

// Integer vector in the span of B whose reduction mod ell is the unique
// eigenvector of M/denom with eigenvalue c inside the block; entries lie in
// [0, ell).  Fails unless the eigenvalue is simple on the block mod ell.
ZVec block_eigenvector_mod(const ZMat& M, const mpz_class& denom, const ZMat& B,
                           const mpz_class& c, u64 ell);

// Generator mod ell of the solutions of (M/denom) v = lambda v (mod ell^k),
// entries in [0, ell); requires the unit-content solution line mod ell^k to
// be unique, which isolates a single ell-adic eigenvalue once k separates
// lambda from the other eigenvalues congruent to it mod ell.
ZVec eigenvector_mod_ellk(const ZMat& M, const mpz_class& denom, const mpz_class& lambda,
                          u64 ell, int k);

// Digit vectors (base ell, length k) of every residue r mod ell^k with
// f(r) = 0 mod ell^k, sorted by residue.
std::vector<std::vector<long>> padic_root_digits(const ZPoly& f, u64 ell, int k);

struct CongruenceReport {
  u64 ell = 0;
  int kernel_dim = 0;  // rank over F_ell of the reduced vectors
  UMat vectors;        // columns: content-stripped reductions over F_ell
  std::string verdict;  // collinear | common-eigenspace-forced | independent
  // eigenvalues[i][j]: eigenvalue of operator i on vector j mod ell, or -1
  // when the vector is not an eigenvector of that operator
  std::vector<std::vector<i64>> eigenvalues;
};

// Reduce integer vectors mod ell (content stripped first) and classify:
// "collinear" if pairwise proportional; else "common-eigenspace-forced" when
// they span fewer dimensions than their count and each is an eigenvector of
// every supplied operator mod ell; otherwise "independent".
CongruenceReport congruence_report(const std::vector<ZVec>& vectors, u64 ell,
                                   const std::vector<const HeckeOperator*>& ops);

// Monic factors of f (product equals f exactly): linear factors split off by
// integer root search, repeated factors by gcd with the derivative, and
// factors of degree <= cap recovered by bounded modular recombination
// (Hensel-lifted and certified by exact division); the uncracked remainder,
// if any, comes last.  No unbounded factorization is attempted.
std::vector<ZPoly> split_blocks(const ZPoly& f, int cap = 16);

// True when modular factorization degree patterns prove f irreducible over Q
// within the given number of usable primes; false means "not certified".
bool certify_irreducible(const ZPoly& f, int attempts = 12);

}  // namespace omf5
