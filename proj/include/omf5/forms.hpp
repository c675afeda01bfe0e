// Integral quinary quadratic forms in the Hessian convention: a form is a
// symmetric 5x5 integer matrix H with even diagonal, Q(v) = v^T H v / 2,
// <v,w> = v^T H w.  Genus symbols (D-, D+) describe special lattices of
// determinant 2*D-*D+ whose Hasse-Witt invariant is -1 exactly at the primes
// dividing D- (and at infinity).
#pragma once

#include "omf5/linalg.hpp"
#include "omf5/matrix.hpp"

namespace omf5 {

// Build a Hessian from the 15 upper-triangle coefficients of
// Q = sum a_ij x_i x_j listed row by row (a11, a12, ..., a15, a22, ...).
IMat hessian_from_coeffs(const std::vector<i64>& a);
std::vector<i64> coeffs_from_hessian(const IMat& h);

bool is_integral_hessian(const IMat& h);
bool is_positive_definite(const IMat& h);
void require_form(const IMat& h);  // integral + positive definite or invalid-input

mpz_class form_determinant(const IMat& h);  // det(H) = 2*D for genus forms
i64 half_determinant(const IMat& h);        // D = det(H)/2, must be exact

// Hilbert symbol (a,b)_v; v = 0 means the real place, otherwise v is prime.
int hilbert_symbol(const mpq_class& a, const mpq_class& b, i64 v);

// Hasse-Witt invariant of the rational quadratic space (V, Q) at the place v,
// computed from a rational diagonalization of the Gram matrix H/2 with the
// normalization HW = (-1,-1)_v * prod_{i<=j} (d_i, d_j)_v restricted to i<j
// times (-1,-1)_v; positive-definite forms give HW_infinity = -1.
int hasse_witt(const IMat& h, i64 v);

// Elementary divisors of the discriminant group L^#/L, i.e. the SNF of H.
std::array<mpz_class, 5> discriminant_group(const IMat& h);

// A lattice is special when its discriminant group is cyclic.
bool is_special(const IMat& h);

// Eichler invariant at a prime p: +1 when p does not divide D; otherwise the
// sign distinguishing the two local isometry classes of the unimodular Jordan
// block (p odd; the form must be special at p).
int eichler_invariant(const IMat& h, i64 p);

// Canonical generator of the radical of Q on L/2qL at an odd prime q | D.
// Entries lie in [0, 2q).  The representative is normalized so that
// Q(v)/q mod 4q is the smallest value in its square class; this pins the
// generator up to sign, and the sign is fixed lexicographically.  The
// normalization makes transporter multipliers between any two lattices in
// one genus equal +-1.
IVec radical_generator(const IMat& h, i64 q);

// Q(v)/q mod 4q for a radical element v (entries taken as the integer lift).
i64 radical_qvalue(const IMat& h, const IVec& v, i64 q);

struct GenusSym {
  i64 d_minus = 1;
  i64 d_plus = 1;
  i64 disc() const { return d_minus * d_plus; }
};

// Validate a genus symbol; throws no-genus when omega(D-) is even and
// invalid-input on malformed symbols (D- not squarefree, shared factors,
// even discriminant).
void validate_genus_symbol(const GenusSym& g);

// Check that h has every invariant required of a seed for the symbol g.
bool matches_genus_symbol(const IMat& h, const GenusSym& g, std::string* why = nullptr);

// Deterministic search for the first Minkowski-boxed form matching the
// symbol, with all form coefficients bounded by coeff_bound.
IMat seed_search(i64 d_minus, i64 d_plus, i64 coeff_bound);

}  // namespace omf5
