#include "doctest.h"
#include "omf5/neighbours.hpp"

#include <algorithm>
#include <map>

using namespace omf5;

namespace {

const std::vector<i64> q61_coeffs{1, 0, 0, 1, 1, 1, 0, 1, 0, 1, 0, 0, 1, 0, 8};
IMat q61() { return hessian_from_coeffs(q61_coeffs); }

}  // namespace

TEST_CASE("isotropic line counts") {
  CHECK(isotropic_lines(q61(), 2).size() == 15);
  CHECK(isotropic_lines(q61(), 3).size() == 40);
  CHECK(isotropic_lines(q61(), 5).size() == 156);
  // prime dividing the discriminant is rejected
  CHECK_THROWS_AS(isotropic_lines(q61(), 61), OmfError);
  CHECK_THROWS_AS(isotropic_lines(q61(), 4), OmfError);
}

TEST_CASE("isotropic plane counts") {
  CHECK(isotropic_planes(q61(), 2).size() == 15);
  CHECK(isotropic_planes(q61(), 3).size() == 40);
}

TEST_CASE("p-neighbour invariants") {
  IMat h = q61();
  for (i64 p : {2LL, 3LL}) {
    auto lines = isotropic_lines(h, p);
    for (size_t k = 0; k < lines.size(); k += 5) {
      Neighbour nb = p_neighbour(h, p, lines[k]);
      CHECK(is_integral_hessian(nb.hess));
      CHECK(form_determinant(nb.hess) == 122);
      std::string why;
      CHECK(matches_genus_symbol(nb.hess, {61, 1}, &why));
      // basis transports h to the neighbour Gram
      QMat g = nb.basis.transpose() * to_q(to_z(h)) * nb.basis;
      CHECK(to_z_exact(g) == to_z(nb.hess));
    }
  }
}

TEST_CASE("pp-neighbour invariants") {
  IMat h = q61();
  auto planes = isotropic_planes(h, 2);
  REQUIRE(planes.size() == 15);
  for (size_t k = 0; k < planes.size(); k += 3) {
    auto nbs = pp_neighbours(h, 2, planes[k]);
    REQUIRE(nbs.size() == 2);  // p lattices per plane
    for (const Neighbour& nb : nbs) {
      CHECK(is_integral_hessian(nb.hess));
      CHECK(form_determinant(nb.hess) == 122);
      std::string why;
      CHECK(matches_genus_symbol(nb.hess, {61, 1}, &why));
      QMat g = nb.basis.transpose() * to_q(to_z(h)) * nb.basis;
      CHECK(to_z_exact(g) == to_z(nb.hess));
    }
  }
}

TEST_CASE("genus of the det-122 form has 8 classes") {
  Genus g = enumerate_genus(q61(), 2);
  CHECK(g.classes.size() == 8);
  CHECK(g.traversal_prime == 2);
  CHECK(g.sym.d_minus == 61);
  CHECK(g.sym.d_plus == 1);
  // classes pairwise non-isometric
  for (size_t i = 0; i < g.classes.size(); ++i)
    for (size_t j = i + 1; j < g.classes.size(); ++j)
      CHECK(!isometry_map(g.classes[i].hess, g.classes[j].hess).has_value());
  // from_seed chains verified at registration; orders even
  for (const GenusClass& c : g.classes) {
    CHECK(c.aut.order % 2 == 0);
    CHECK(c.aut.proper_order * 2 == c.aut.order);
  }
}

TEST_CASE("seed class neighbour distribution at p=2") {
  Genus g = enumerate_genus(q61(), 2);
  REQUIRE(g.classes.size() == 8);
  std::vector<i64> row(8, 0);
  for (const IVec& line : isotropic_lines(g.classes[0].hess, 2)) {
    Neighbour nb = p_neighbour(g.classes[0].hess, 2, line);
    int j = identify_class(g, nb.hess, theta_prefix(nb.hess), nullptr);
    REQUIRE(j >= 0);
    ++row[(size_t)j];
  }
  std::vector<i64> sorted = row;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<i64>{0, 0, 0, 0, 0, 4, 4, 7});
}

TEST_CASE("genus is independent of the traversal prime") {
  Genus g2 = enumerate_genus(q61(), 2);
  Genus g3 = enumerate_genus(q61(), 3);
  CHECK(g2.classes.size() == g3.classes.size());
  CHECK(g2.mass == g3.mass);
  // same classes up to isometry (a bijection matching theta prefixes first)
  std::vector<bool> used(g3.classes.size(), false);
  for (const GenusClass& c : g2.classes) {
    bool found = false;
    for (size_t j = 0; j < g3.classes.size() && !found; ++j) {
      if (used[j] || g3.classes[j].theta != c.theta) continue;
      if (isometry_map(c.hess, g3.classes[j].hess).has_value()) {
        used[j] = true;
        found = true;
      }
    }
    CHECK(found);
  }
}

TEST_CASE("mass sanity") {
  Genus g = enumerate_genus(q61(), 2);
  mpq_class m = 0;
  for (const GenusClass& c : g.classes) m += mpq_class(1, c.aut.order);
  CHECK(g.mass == m);
  CHECK(g.mass > 0);
}

TEST_CASE("identify_class on a foreign form returns -1") {
  Genus g = enumerate_genus(q61(), 2);
  IMat d2(5, 5);
  for (int i = 0; i < 5; ++i) d2(i, i) = 2;
  CHECK(identify_class(g, d2, theta_prefix(d2), nullptr) == -1);
}

TEST_CASE("small genus D=5 runs at several primes") {
  IMat s = seed_search(5, 1, 16);
  Genus a = enumerate_genus(s, 2);
  Genus b = enumerate_genus(s, 3);
  Genus c = enumerate_genus(s, 7);
  CHECK(a.classes.size() == b.classes.size());
  CHECK(a.classes.size() == c.classes.size());
  CHECK(a.mass == b.mass);
  CHECK(a.mass == c.mass);
}
