// Characteristic polynomials, factor extraction, and mod-ell analysis on
// small hand-checkable inputs.
#include <algorithm>

#include "doctest.h"
#include "omf5/eigen.hpp"

using namespace omf5;

namespace {

// det(xI - M) by Laplace expansion over polynomial entries: slow oracle
ZPoly poly_det(const std::vector<std::vector<ZPoly>>& A) {
  size_t n = A.size();
  if (n == 1) return A[0][0];
  ZPoly acc;
  for (size_t j = 0; j < n; ++j) {
    if (zp_is_zero(A[0][j])) continue;
    std::vector<std::vector<ZPoly>> minor;
    for (size_t i = 1; i < n; ++i) {
      std::vector<ZPoly> row;
      for (size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(A[i][k]);
      minor.push_back(std::move(row));
    }
    ZPoly term = zp_mul(A[0][j], poly_det(minor));
    acc = (j % 2 == 0) ? zp_add(acc, term) : zp_sub(acc, term);
  }
  return acc;
}

ZPoly naive_charpoly(const ZMat& M) {
  int n = M.rows();
  std::vector<std::vector<ZPoly>> A(n, std::vector<ZPoly>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      A[i][j] = ZPoly{-M(i, j)};
      if (i == j) A[i][j].push_back(1);
      zp_normalize(A[i][j]);
    }
  return poly_det(A);
}

ZMat companion(const ZPoly& f) {
  int n = zp_deg(f);
  ZMat C(n, n);
  for (int i = 1; i < n; ++i) C(i, i - 1) = 1;
  for (int i = 0; i < n; ++i) C(i, n - 1) = -f[i];
  return C;
}

}  // namespace

TEST_CASE("charpoly of the identity") {
  CharPoly cp = char_poly(to_z(IMat::identity(5)), 1, "id");
  ZPoly expected = {1};
  for (int i = 0; i < 5; ++i) expected = zp_mul(expected, zp_from({-1, 1}));
  CHECK(cp.coeffs == expected);
  CHECK(cp.provenance == "id");
}

TEST_CASE("charpoly matches cofactor expansion on random matrices") {
  u64 state = 12345;
  auto rnd = [&]() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return (i64)((state >> 33) % 19) - 9;  // entries in [-9, 9]
  };
  for (int trial = 0; trial < 4; ++trial) {
    ZMat M(6, 6);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) M(i, j) = rnd();
    CHECK(char_poly(M).coeffs == naive_charpoly(M));
  }
}

TEST_CASE("Cayley-Hamilton holds mod a prime") {
  ZMat M(4, 4, {3, -1, 0, 2, 5, 2, 2, -7, 0, 1, 1, 1, -4, 0, 6, 2});
  ZPoly f = char_poly(M).coeffs;
  for (u64 q : {10007ULL, 65537ULL}) {
    UMat Mq = reduce_mod(M, q);
    UMat R(4, 4);
    auto cmod = [&](const mpz_class& c) {
      mpz_class r = c % (long)q;
      if (r < 0) r += (long)q;
      return r.get_ui();
    };
    for (int i = 0; i < 4; ++i) R(i, i) = cmod(f[4]);
    for (int k = 3; k >= 0; --k) {
      UMat S(4, 4);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          u64 acc = 0;
          for (int t = 0; t < 4; ++t) acc = addmod_u64(acc, mulmod_u64(R(i, t), Mq(t, j), q), q);
          S(i, j) = acc;
        }
      for (int i = 0; i < 4; ++i) S(i, i) = addmod_u64(S(i, i), cmod(f[k]), q);
      R = S;
    }
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) CHECK(R(i, j) == 0);
  }
}

TEST_CASE("verify_factor_product") {
  CHECK(verify_factor_product(zp_from({-1, 0, 1}), {zp_from({-1, 1}), zp_from({1, 1})}));
  CHECK_FALSE(verify_factor_product(zp_from({-1, 0, 1}), {zp_from({-1, 1}), zp_from({-1, 1})}));
  CHECK(verify_factor_product(zp_from({6, 11, 6, 1}),
                              {zp_from({1, 1}), zp_from({2, 1}), zp_from({3, 1})}));
}

TEST_CASE("rational roots with multiplicity") {
  // (x-2)^2 (x+5) (x^2+x+1)
  ZPoly f = zp_mul(zp_mul(zp_mul(zp_from({-2, 1}), zp_from({-2, 1})), zp_from({5, 1})),
                   zp_from({1, 1, 1}));
  auto roots = rational_roots(f);
  REQUIRE(roots.size() == 2);
  CHECK(roots[0].first == -5);
  CHECK(roots[0].second == 1);
  CHECK(roots[1].first == 2);
  CHECK(roots[1].second == 2);
  CHECK(rational_roots(zp_from({1, 1, 1})).empty());
}

TEST_CASE("rational roots beyond word size") {
  mpz_class big("1000000000000000000000000000000");  // 10^30
  ZPoly f = zp_mul(ZPoly{-big, 1}, zp_from({1, 1}));
  auto roots = rational_roots(f);
  REQUIRE(roots.size() == 2);
  CHECK(roots[0].first == -1);
  CHECK(roots[1].first == big);
}

TEST_CASE("block_split on a companion matrix") {
  ZPoly f2 = zp_from({-2, 0, 1});            // x^2 - 2
  ZPoly f1 = zp_from({-3, 1});               // x - 3
  ZMat M = companion(zp_mul(f1, f2));
  ZMat b1 = block_split(M, 1, f1);
  ZMat b2 = block_split(M, 1, f2);
  CHECK(b1.cols() == 1);
  CHECK(b2.cols() == 2);
  // the two lattices only meet at zero: joint matrix has full rank 3
  ZMat join(3, 3);
  for (int i = 0; i < 3; ++i) {
    join(i, 0) = b1(i, 0);
    join(i, 1) = b2(i, 0);
    join(i, 2) = b2(i, 1);
  }
  CHECK(det_bareiss(join) != 0);
  CHECK_THROWS_AS((void)block_split(M, 1, zp_from({-1, 1})), OmfError);
}

TEST_CASE("block_split through the cofactor image") {
  ZPoly small = zp_mul(zp_from({-1, 1}), zp_from({-2, 1}));
  ZPoly big = zp_from({1, 1, 0, 1});  // x^3 + x + 1
  ZMat M = companion(zp_mul(small, big));
  ZMat b = block_split(M, 1, big);  // cofactor has smaller degree: image path
  REQUIRE(b.cols() == 3);
  // verify the kernel property exactly: big(M) * b == 0
  ZMat F(5, 5);
  for (int i = 0; i < 5; ++i) F(i, i) = big[3];
  for (int k = 2; k >= 0; --k) {
    F = F * M;
    for (int i = 0; i < 5; ++i) F(i, i) += big[k];
  }
  ZMat FB = F * b;
  for (int i = 0; i < FB.rows(); ++i)
    for (int j = 0; j < FB.cols(); ++j) CHECK(FB(i, j) == 0);
}

TEST_CASE("block_split with a denominator") {
  ZPoly f2 = zp_from({-2, 0, 1});
  ZPoly f1 = zp_from({-3, 1});
  ZMat M = companion(zp_mul(f1, f2));
  ZMat M3 = M;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) M3(i, j) *= 3;
  CHECK(block_split(M3, 3, f1) == block_split(M, 1, f1));
  CHECK(block_split(M3, 3, f2) == block_split(M, 1, f2));
}

TEST_CASE("mod_ell_kernel") {
  ZMat I5 = to_z(IMat::identity(5));
  UMat full = mod_ell_kernel(I5, 1, 1, 5);
  CHECK(full.cols() == 5);
  ZMat M(2, 2, {3, 0, 0, 8});
  UMat k3 = mod_ell_kernel(M, 1, 3, 7);
  REQUIRE(k3.cols() == 1);
  CHECK(k3(0, 0) == 1);
  CHECK(k3(1, 0) == 0);
  CHECK_THROWS_AS((void)mod_ell_kernel(M, 1, 0, 6), OmfError);   // composite modulus
  CHECK_THROWS_AS((void)mod_ell_kernel(M, 7, 0, 7), OmfError);   // denominator dies mod ell
}

TEST_CASE("restrict_action on a stable span") {
  ZMat M(3, 3, {1, 1, 0, 0, 1, 0, 0, 0, 5});
  ZMat B(3, 2, {1, 0, 0, 1, 0, 0});
  ZMat R = restrict_action(M, 1, B);
  CHECK(R == ZMat(2, 2, {1, 1, 0, 1}));
  ZMat bad(3, 1, {0, 1, 1});  // M e2 = e1 + e2 escapes the span of e2 + e3
  CHECK_THROWS_AS((void)restrict_action(M, 1, bad), OmfError);
}

TEST_CASE("block eigenvector mod ell") {
  // companion of (x-3)(x-4): eigenvector of 3 inside the full space
  ZMat M = companion(zp_mul(zp_from({-3, 1}), zp_from({-4, 1})));
  ZMat B = to_z(IMat::identity(2));
  ZVec v = block_eigenvector_mod(M, 1, B, 3, 11);
  // (M - 3) v = 0 mod 11
  ZVec w = M * v;
  for (int i = 0; i < 2; ++i) CHECK((w[i] - 3 * v[i]) % 11 == 0);
}

TEST_CASE("eigenvector_mod_ellk separates close eigenvalues") {
  ZMat M(2, 2, {3, 0, 0, 8});  // eigenvalues 3 and 8, congruent mod 5
  CHECK_THROWS_AS((void)eigenvector_mod_ellk(M, 1, 3, 5, 1), OmfError);  // not isolated
  ZVec v = eigenvector_mod_ellk(M, 1, 3, 5, 2);
  CHECK(v == ZVec{1, 0});
  ZVec w = eigenvector_mod_ellk(M, 1, 8, 5, 2);
  CHECK(w == ZVec{0, 1});
}

TEST_CASE("padic root digits") {
  // (x-2)(x-8)(x^2+2): mod-5 roots 2 and 3 are simple
  ZPoly f = zp_mul(zp_mul(zp_from({-2, 1}), zp_from({-8, 1})), zp_from({2, 0, 1}));
  auto digits = padic_root_digits(f, 5, 3);
  REQUIRE(digits.size() == 2);
  CHECK(digits[0] == std::vector<long>{2, 0, 0});
  CHECK(digits[1] == std::vector<long>{3, 1, 0});
  CHECK(padic_root_digits(zp_from({2, 0, 1}), 5, 2).empty());
}

TEST_CASE("padic digits after recentering at an eigenvalue") {
  // lambda = -7 + 10*19 + 8*19^2 as a root: recentre with x = -7 + 19 y
  mpz_class lam = -7 + 10 * 19 + 8 * 19 * 19;
  ZPoly f = zp_mul(ZPoly{-lam, 1}, zp_from({1, 1}));  // (x - lam)(x + 1)
  ZPoly g = zp_compose_linear(f, -7, 19);
  mpz_class content = zp_content(g);
  ZPoly q;
  CHECK(zp_divide_exact(g, ZPoly{content}, q));
  auto digits = padic_root_digits(q, 19, 2);
  REQUIRE(digits.size() == 1);
  CHECK(digits[0] == std::vector<long>{10, 8});
}

TEST_CASE("congruence verdicts on synthetic vectors") {
  std::vector<const HeckeOperator*> none;
  // collinear after content stripping
  auto rep = congruence_report({{7, 14, 7}, {1, 2, 1}}, 7, none);
  CHECK(rep.verdict == "collinear");
  CHECK(rep.kernel_dim == 1);
  // independent: rank equals count
  HeckeOperator D;
  D.p = 2;
  D.kind = 1;
  D.denom = 1;
  D.mat = ZMat(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 2});
  std::vector<const HeckeOperator*> ops = {&D};
  auto rep2 = congruence_report({{1, 0, 0}, {0, 1, 0}}, 7, ops);
  CHECK(rep2.verdict == "independent");
  CHECK(rep2.eigenvalues == std::vector<std::vector<i64>>{{1, 1}});
  // three pairwise non-proportional vectors in a plane, all eigenvectors
  auto rep3 = congruence_report({{1, 0, 0}, {0, 1, 0}, {1, 1, 0}}, 7, ops);
  CHECK(rep3.verdict == "common-eigenspace-forced");
  CHECK(rep3.kernel_dim == 2);
  // not an eigenvector of D: verdict falls back to independent
  auto rep4 = congruence_report({{1, 0, 0}, {0, 0, 1}, {1, 0, 1}}, 7, ops);
  CHECK(rep4.verdict == "independent");
  CHECK(rep4.eigenvalues == std::vector<std::vector<i64>>{{1, 2, -1}});
  CHECK_THROWS_AS((void)congruence_report({{0, 0, 0}}, 7, none), OmfError);
}

TEST_CASE("split_blocks finds small factors") {
  // (x-1)^2 (x^2-2) (x^4+x+1)
  ZPoly f = zp_mul(zp_mul(zp_mul(zp_from({-1, 1}), zp_from({-1, 1})), zp_from({-2, 0, 1})),
                   zp_from({1, 1, 0, 0, 1}));
  auto blocks = split_blocks(f);
  REQUIRE(blocks.size() == 4);
  CHECK(blocks[0] == zp_from({-1, 1}));
  CHECK(blocks[1] == zp_from({-1, 1}));
  CHECK(blocks[2] == zp_from({-2, 0, 1}));
  CHECK(blocks[3] == zp_from({1, 1, 0, 0, 1}));
  CHECK_THROWS_AS((void)split_blocks(zp_from({1, 0, 0, 2})), OmfError);  // not monic
}

TEST_CASE("split_blocks with large coefficients lifts past word size") {
  mpz_class a("2000000000000000000000000000000");   // 2*10^30
  mpz_class b("10000000000000000000000000");        // 10^25
  ZPoly f = zp_mul(ZPoly{-a, 0, 1}, ZPoly{-b, -1, 0, 1});  // (x^2-a)(x^3-x-b)
  auto blocks = split_blocks(f);
  REQUIRE(blocks.size() == 2);
  CHECK(zp_deg(blocks[0]) == 2);
  CHECK(zp_deg(blocks[1]) == 3);
  CHECK(verify_factor_product(f, blocks));
}

TEST_CASE("irreducibility certificates") {
  CHECK(certify_irreducible(zp_from({1, 0, 1})));           // x^2 + 1
  CHECK(certify_irreducible(zp_from({1, 1, 0, 0, 1})));     // x^4 + x + 1
  CHECK_FALSE(certify_irreducible(zp_from({-1, 0, 1})));    // reducible: never certified
  // x^4 + 1 factors mod every prime: the pattern test must stay silent
  CHECK_FALSE(certify_irreducible(zp_from({1, 0, 0, 0, 1})));
}
