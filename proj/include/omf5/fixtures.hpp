// Classical newform eigenvalue data and the lift eigenvalue formulas used to
// recognize Saito-Kurokawa and Yoshida blocks in the computed spaces.
#pragma once

#include <map>
#include <optional>
#include <string>

#include <gmpxx.h>

#include "omf5/intmath.hpp"

namespace omf5 {

// Residues of a non-rational eigenvalue system at a fixed prime ell: the
// value at p is a_p reduced modulo a degree-one prime above ell.
struct ApResidues {
  u64 ell = 0;
  std::map<i64, u64> values;
};

struct NewformFixture {
  std::string label;
  i64 level = 0;
  int weight = 0;
  std::map<i64, mpz_class> ap;    // exact eigenvalues (rational forms)
  std::optional<ApResidues> ap_mod;
  std::map<i64, int> al_signs;    // Atkin-Lehner signs at primes | level
  std::string source;
};

// Parse a fixture from JSON text.  Throws invalid-input on schema errors and
// inconsistency when an exact eigenvalue violates the Ramanujan bound
// |a_p| <= 2 p^{(weight-1)/2}.
NewformFixture parse_fixture(const std::string& json_text);

// Load and validate a fixture file; missing files are a distinct
// invalid-input error from schema violations.
NewformFixture load_fixture(const std::string& path);

// T(p)-eigenvalue of the Saito-Kurokawa lift of a weight 2k-2 newform,
// transferred to vector-valued weight (k, j): ap + p^{k-2} + p^{j+k-1}.
mpz_class sk_eigenvalue(i64 p, const mpz_class& ap, int k, int j);

// T(p)-eigenvalue of the Yoshida lift of a pair (g, h) of newforms of
// weights 2+a-b and 4+a+b: ap_h + p^{b+1} * ap_g.
mpz_class yoshida_eigenvalue(i64 p, const mpz_class& ap_g, const mpz_class& ap_h, int b);

// True when every stored eigenvalue at p coprime to level*ell satisfies the
// weight-w Eisenstein congruence a_p = 1 + p^{w-1} (mod ell).
bool eisenstein_congruent(const NewformFixture& f, u64 ell);

}  // namespace omf5
