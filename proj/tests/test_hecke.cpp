// Hecke operators on the determinant-122 genus, against hand-checked data.
#include "doctest.h"
#include "omf5/hecke.hpp"
#include "omf5/linalg.hpp"
#include "omf5/poly.hpp"

using namespace omf5;

namespace {

IMat q61() {
  return hessian_from_coeffs({1, 0, 0, 1, 1, 1, 0, 1, 0, 1, 0, 0, 1, 0, 8});
}

const Genus& genus61() {
  static Genus g = enumerate_genus(q61(), 2);
  return g;
}

ZPoly op_fcp(const HeckeOperator& T) {
  // crude eigenvalue bound: n * max |entry| / denom, doubled for slack
  mpz_class mx = 1;
  for (int i = 0; i < T.mat.rows(); ++i)
    for (int j = 0; j < T.mat.cols(); ++j) {
      mpz_class a = abs(T.mat(i, j));
      if (a > mx) mx = a;
    }
  mpz_class bound = 2 * T.mat.rows() * mx + 2;
  return charpoly(T.mat, T.denom, bound);
}

bool commute(const HeckeOperator& A, const HeckeOperator& B) {
  return A.mat * B.mat == B.mat * A.mat;
}

}  // namespace

TEST_CASE("theta signs of simple isometries") {
  auto h = q61();
  IVec v0 = radical_generator(h, 61);
  IMat id = IMat::identity(5);
  CHECK(theta_sign(id, v0, 61) == 1);
  IMat mi(5, 5);
  for (int i = 0; i < 5; ++i) mi(i, i) = -1;
  CHECK(theta_sign(mi, v0, 61) == -1);
  CHECK(theta_sign(to_q(mi), v0, v0, 61) == -1);
}

TEST_CASE("trivial weight space counts classes") {
  const Genus& g = genus61();
  auto sp = build_space(g, 0, 0, 1);
  CHECK(sp.dim == 8);
  for (const auto& blk : sp.blocks) {
    CHECK(blk.dim == 1);
    CHECK(abs(blk.basis(0, 0)) == 1);
  }
}

TEST_CASE("theta character splits the trivial weight space") {
  const Genus& g = genus61();
  auto plus = build_space(g, 0, 0, 1);
  auto minus = build_space(g, 0, 0, 61);
  // every class has a proper automorphism of nontrivial spinor character
  // at 61, so the twisted component of the trivial weight is empty
  CHECK(plus.dim == 8);
  CHECK(minus.dim == 0);
  // invalid character indices
  CHECK_THROWS_AS((void)build_space(g, 0, 0, 2), OmfError);
  CHECK_THROWS_AS((void)build_space(g, 0, 0, 0), OmfError);
}

TEST_CASE("T(2) on the trivial weight reproduces the neighbour graph") {
  const Genus& g = genus61();
  auto sp = build_space(g, 0, 0, 1);
  auto T2 = hecke_matrix(sp, 2, 1);
  CHECK(T2.denom == 1);
  // rows sum to the neighbour count
  for (int i = 0; i < 8; ++i) {
    mpz_class s = 0;
    for (int j = 0; j < 8; ++j) s += T2.mat(i, j);
    CHECK(s == 15);
  }
  // seed row distribution
  std::vector<i64> row;
  for (int j = 0; j < 8; ++j) row.push_back((i64)T2.mat(0, j).get_si());
  std::sort(row.begin(), row.end());
  CHECK(row == IVec{0, 0, 0, 0, 0, 4, 4, 7});
  // characteristic polynomial: (x-15)(x+7)(x^6-29x^5+322x^4-1714x^3+4471x^2-5205x+2026)
  ZPoly expected = zp_mul(
      zp_mul(zp_from({-15, 1}), zp_from({7, 1})),
      zp_from({2026, -5205, 4471, -1714, 322, -29, 1}));
  CHECK(op_fcp(T2) == expected);
}

TEST_CASE("Hecke operators commute") {
  const Genus& g = genus61();
  auto sp = build_space(g, 0, 0, 1);
  auto T2 = hecke_matrix(sp, 2, 1);
  auto T3 = hecke_matrix(sp, 3, 1);
  auto T14 = hecke_matrix(sp, 2, 2);
  CHECK(commute(T2, T3));
  CHECK(commute(T2, T14));
  CHECK(commute(T3, T14));
  // trivial-weight row sums are the operator degree p(p+1)(p^2+1) = 30
  for (int i = 0; i < 8; ++i) {
    mpz_class s = 0;
    for (int j = 0; j < 8; ++j) s += T14.mat(i, j);
    CHECK(s == 30 * T14.denom);
  }
}

TEST_CASE("threads do not change the operator") {
  const Genus& g = genus61();
  auto sp = build_space(g, 1, 1, 61);
  REQUIRE(sp.dim > 0);
  auto a = hecke_matrix(sp, 2, 1, 1);
  auto b = hecke_matrix(sp, 2, 1, 4);
  CHECK(a.mat == b.mat);
  CHECK(a.denom == b.denom);
}

TEST_CASE("vector valued space is Hecke stable and consistent across traversal primes") {
  const Genus& g2 = genus61();
  Genus g3 = enumerate_genus(q61(), 3);
  for (auto [a, b, d] : std::vector<std::array<i64, 3>>{{1, 1, 61}, {2, 0, 1}}) {
    auto sp2 = build_space(g2, (int)a, (int)b, d);
    auto sp3 = build_space(g3, (int)a, (int)b, d);
    CHECK(sp2.dim == sp3.dim);
    if (sp2.dim == 0) continue;
    auto t2 = hecke_matrix(sp2, 3, 1);
    auto t3 = hecke_matrix(sp3, 3, 1);
    CHECK(op_fcp(t2) == op_fcp(t3));
  }
}

TEST_CASE("weight and character dimension table") {
  const Genus& g = genus61();
  // (a, b, d) -> dim; the two characters exhaust the space weight by weight
  std::vector<std::array<i64, 4>> table = {
      {0, 0, 1, 8}, {0, 0, 61, 0}, {1, 1, 1, 0},  {1, 1, 61, 16},
      {2, 0, 1, 9}, {2, 0, 61, 1}, {2, 2, 1, 31}, {2, 2, 61, 0},
      {3, 1, 1, 8}, {3, 1, 61, 31}};
  for (auto [a, b, d, dim] : table) {
    auto sp = build_space(g, (int)a, (int)b, d);
    CHECK(sp.dim == dim);
  }
}

TEST_CASE("normalized operator on a line has an integer eigenvalue") {
  const Genus& g = genus61();
  auto sp = build_space(g, 2, 0, 61);
  REQUIRE(sp.dim == 1);
  for (auto [p, kind] : std::vector<std::pair<i64, int>>{{2, 1}, {3, 1}, {2, 2}}) {
    auto T = hecke_matrix(sp, p, kind);
    // charpoly certifies integrality against an extra prime internally
    ZPoly f = op_fcp(T);
    CHECK((int)f.size() == 2);
  }
}

TEST_CASE("hecke rejects bad primes and kinds") {
  const Genus& g = genus61();
  auto sp = build_space(g, 0, 0, 1);
  CHECK_THROWS_AS((void)hecke_matrix(sp, 61, 1), OmfError);  // ramified
  CHECK_THROWS_AS((void)hecke_matrix(sp, 6, 1), OmfError);   // composite
  CHECK_THROWS_AS((void)hecke_matrix(sp, 2, 3), OmfError);   // unknown kind
}
