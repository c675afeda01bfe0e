// Exact univariate polynomial arithmetic: integer polynomials (little-endian
// coefficient vectors) plus arithmetic and factorization over word-size
// prime fields.
#pragma once

#include <gmpxx.h>

#include <vector>

#include "omf5/intmath.hpp"

namespace omf5 {

using ZPoly = std::vector<mpz_class>;  // c[0] + c[1]x + ...; empty = zero
using MPoly = std::vector<u64>;        // coefficients mod a prime

void zp_normalize(ZPoly& f);
int zp_deg(const ZPoly& f);  // -1 for the zero polynomial
bool zp_is_zero(const ZPoly& f);
ZPoly zp_from(const std::vector<long>& cs);
ZPoly zp_add(const ZPoly& f, const ZPoly& g);
ZPoly zp_sub(const ZPoly& f, const ZPoly& g);
ZPoly zp_neg(ZPoly f);
ZPoly zp_mul(const ZPoly& f, const ZPoly& g);
ZPoly zp_scale(const ZPoly& f, const mpz_class& c);

// Quotient of f by g when the division is exact over Q and the quotient is
// integral; returns false otherwise.
bool zp_divide_exact(const ZPoly& f, const ZPoly& g, ZPoly& quo);

mpz_class zp_content(const ZPoly& f);
ZPoly zp_primitive(const ZPoly& f);  // content removed, leading coeff > 0
ZPoly zp_derivative(const ZPoly& f);
mpz_class zp_eval(const ZPoly& f, const mpz_class& x);
u64 zp_eval_mod(const ZPoly& f, u64 x, u64 q);

// f(a + b*y) as a polynomial in y.
ZPoly zp_compose_linear(const ZPoly& f, const mpz_class& a, const mpz_class& b);

// gcd over Z via the primitive polynomial remainder sequence; result is
// primitive with positive leading coefficient.
ZPoly zp_gcd(const ZPoly& f, const ZPoly& g);

// ---- arithmetic mod a word prime ----------------------------------------
MPoly mp_reduce(const ZPoly& f, u64 q);
void mp_normalize(MPoly& f);
int mp_deg(const MPoly& f);
MPoly mp_mul(const MPoly& f, const MPoly& g, u64 q);
MPoly mp_rem(MPoly f, const MPoly& g, u64 q);
MPoly mp_monic(MPoly f, u64 q);
MPoly mp_gcd(MPoly f, MPoly g, u64 q);
MPoly mp_powmod(const MPoly& base, const mpz_class& e, const MPoly& mod, u64 q);

// Distinct-degree factorization of a squarefree monic f: list of
// (d, product of all irreducible factors of degree d).
std::vector<std::pair<int, MPoly>> mp_ddf(const MPoly& f, u64 q);

// Equal-degree splitting (Cantor-Zassenhaus) of a product of degree-d
// irreducibles.  Deterministic: the internal PRNG is seeded from the input.
std::vector<MPoly> mp_edf(const MPoly& f, int d, u64 q);

// Full factorization of (not necessarily squarefree) f mod q into monic
// irreducibles with multiplicity.
std::vector<std::pair<MPoly, int>> mp_factor(const MPoly& f, u64 q);

}  // namespace omf5
