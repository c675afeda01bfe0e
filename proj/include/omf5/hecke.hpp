// Spaces of algebraic modular forms on a genus: vector-valued functions on
// the classes, cut to a theta character component, with Hecke operators
// T(p) and T1(p^2) assembled from p-neighbour transporters.
#pragma once

#include "omf5/neighbours.hpp"
#include "omf5/weights.hpp"

namespace omf5 {

struct SpaceBlock {
  int class_index = 0;
  i64 dim = 0;        // m_i
  ZMat basis;         // dimW x m_i, saturated integer basis of the component
  QMat left_inverse;  // m_i x dimW with left_inverse * basis = I
};

struct RadicalRef {
  i64 q = 0;
  std::vector<IVec> gens;  // one canonical generator per class
};

struct OMFSpace {
  const Genus* genus = nullptr;
  int a = 0, b = 0;
  i64 d = 1;  // theta character index, unitary divisor of D
  WeightRep weight;
  std::vector<RadicalRef> radicals;  // one entry per prime q | d
  std::vector<SpaceBlock> blocks;    // one per class (dim possibly 0)
  i64 dim = 0;
};

struct HeckeOperator {
  i64 p = 0;
  int kind = 1;  // 1 = T(p), 2 = T1(p^2)
  ZMat mat;      // the operator is mat / denom
  mpz_class denom = 1;
};
// The operator is normalized by p^{(a+b)/2} for T(p) and p^a for T1(p^2),
// which makes its eigenvalues algebraic integers (and is the normalization
// under which the trivial-weight eigenvalue of T(p) on the all-ones vector
// is p^3+p^2+p+1).  mat/denom can still be non-integral entrywise because
// the block bases carry denominators from the seed marking.

// theta_q sign of a form-compatible transporter phi (phi^T H_i phi = H_j,
// denominators prime to 2q): phi * v_src = +-v_dst mod 2q.
int theta_sign(const QMat& phi, const IVec& v_src, const IVec& v_dst, i64 q);
// Same for an integer isometry of a single lattice.
int theta_sign(const IMat& g, const IVec& v0, i64 q);

// The theta_d-isotypic subspace of W under the proper automorphisms of
// class i, as a saturated integer basis.
ZMat character_subspace(const WeightRep& w, const GenusClass& cls, const std::vector<IVec>& rad_gens, i64 d);

OMFSpace build_space(const Genus& genus, int a, int b, i64 d);

HeckeOperator hecke_matrix(const OMFSpace& space, i64 p, int kind, int threads = 1);

}  // namespace omf5
