// Irreducible O(5)-weights W_{a,b}: the harmonic (traceless) subspace of the
// Schur module S_{(a+b)/2,(a-b)/2}(Q^5) cut out inside (Q^5)^{tensor a} by a
// Young symmetrizer, intersected with the kernels of all contractions by the
// invariant bilinear form.  Contractions are taken with respect to the seed
// lattice's own form (no rational congruence to the Euclidean form exists),
// and representations transport to other lattices by the cached rational
// basis matrices.
#pragma once

#include "omf5/matrix.hpp"

namespace omf5 {

// dim W_{a,b} = ((a+2)^2 - (b+1)^2)/3 * (a+2)/2 * (b+1); requires a >= b >= 0
// and a = b mod 2.
i64 weight_dimension(int a, int b);

struct WeightRep {
  int a = 0, b = 0;
  i64 dim = 0;
  i64 ambient = 1;  // 5^a
  IMat gram;        // Hessian the contractions were built against
  // Basis of W inside the ambient tensor space, sparse columns of
  // (index, coefficient) pairs; indices encode multi-indices base 5.
  std::vector<std::vector<std::pair<i64, mpz_class>>> basis;
  std::vector<i64> pivot_rows;  // dim ambient rows forming an invertible minor
  QMat pivot_inv;               // inverse of that minor
};

// Construct W_{a,b} for the form h.  The basis is exact; its dimension is
// certified both ways (candidate columns span at most the Schur module,
// contraction kernel verified by exact evaluation).
WeightRep build_weight(int a, int b, const IMat& h);

// Matrix of rho(g) = det(g)^a * g^{tensor a} restricted to W, for any
// rational g preserving the form up to nothing in particular -- the result
// is exact and is verified to map W into W.
QMat weight_action(const WeightRep& w, const QMat& g);

}  // namespace omf5
