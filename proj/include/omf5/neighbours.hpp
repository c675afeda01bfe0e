// Kneser p-neighbours of quinary lattices and genus enumeration by the
// neighbour graph.  Works at any prime p with p not dividing D = det(H)/2;
// in particular p = 2 is allowed for odd D, where the quadric mod 2 is a
// nondefective parabolic quadric and the count formulas are unchanged.
#pragma once

#include "omf5/forms.hpp"
#include "omf5/isometry.hpp"

namespace omf5 {

// Projectively normalized isotropic lines of Q mod p (first nonzero
// coordinate = 1), in lexicographic order; exactly (p+1)(p^2+1) of them.
std::vector<IVec> isotropic_lines(const IMat& h, i64 p);

// Totally isotropic planes mod p as pairs of spanning vectors in reduced
// echelon form; exactly (p+1)(p^2+1) of them.
std::vector<std::array<IVec, 2>> isotropic_planes(const IMat& h, i64 p);

struct Neighbour {
  IMat hess;   // LLL-reduced Gram of the neighbour
  QMat basis;  // columns: neighbour basis in source-lattice coordinates,
               // det = +-1, hess = basis^T h basis
};

// The p-neighbour attached to an isotropic line.
Neighbour p_neighbour(const IMat& h, i64 p, const IVec& line);

// The p^2-neighbours attached to a totally isotropic plane.  Each plane
// carries exactly p of them (the intersection with the source lattice is
// the same index-p^2 sublattice for all p); over all planes they realize
// the second Hecke operator T1(p^2), of degree p(p+1)(p^2+1).
std::vector<Neighbour> pp_neighbours(const IMat& h, i64 p, const std::array<IVec, 2>& plane);

struct GenusClass {
  IMat hess;            // reduced representative
  QMat from_seed;       // columns: class basis in seed coordinates, det +-1
  IsometryGroup aut;
  std::vector<i64> theta;  // invariant used to prefilter isometry tests
};

struct Genus {
  IMat seed;
  GenusSym sym;
  i64 traversal_prime = 0;
  std::vector<GenusClass> classes;
  mpq_class mass;  // sum of 1/|O(L_i)|
};

// Breadth-first closure of the p-neighbour relation starting at seed.
// Every registered class is checked against the seed's genus invariants.
Genus enumerate_genus(const IMat& seed, i64 p);

// Index of the class isometric to hess, or -1.
int identify_class(const Genus& g, const IMat& hess, const std::vector<i64>& theta, IMat* iso = nullptr);

std::vector<i64> theta_prefix(const IMat& h);

}  // namespace omf5
