// Exact lattice reduction, short vector enumeration, automorphism groups and
// isometry testing for positive-definite Hessians (plain backtracking over
// norm-matched candidate vectors).
#pragma once

#include <optional>

#include "omf5/matrix.hpp"

namespace omf5 {

// LLL reduction of a Gram matrix (delta = 3/4).  Returns H' = U^T H U and
// stores the unimodular U when requested.
IMat lll_gram(const IMat& h, IMat* transform = nullptr);

// LLL followed by the lexicographically minimal signed permutation; a cheap
// deterministic normal form (not a canonical form under GL_n(Z), but stable
// for caching and comparison of traversal output).
IMat reduced_form(const IMat& h, IMat* transform = nullptr);

// All v with 0 < v^T H v <= max_norm, one representative per +-pair
// (first nonzero coordinate positive), sorted by (norm, lex).
std::vector<std::pair<IVec, i64>> short_vectors(const IMat& h, i64 max_norm);

// Representation numbers r_Q(m) for m = 0..prec of Q(v) = v^T H v / 2,
// counting all vectors (so r_Q(0) = 1 and both signs contribute).
std::vector<i64> theta_series(const IMat& h, int prec);

struct IsometryGroup {
  std::vector<IMat> elements;    // all of O(L)
  std::vector<IMat> generators;  // a small generating subset
  i64 order = 0;                 // |O(L)|
  i64 proper_order = 0;          // |SO(L)| = order / 2
};

IsometryGroup automorphism_group(const IMat& h);

// g with g^T h1 g = h2 (columns of g express an h2-basis in h1-coordinates),
// or nullopt when the forms are not isometric.
std::optional<IMat> isometry_map(const IMat& h1, const IMat& h2);

i64 det5(const IMat& m);  // determinant of a small integer matrix

}  // namespace omf5
