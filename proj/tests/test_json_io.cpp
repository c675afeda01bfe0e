#include "omf5/json_io.hpp"

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "omf5/forms.hpp"
#include "omf5/hecke.hpp"
#include "omf5/neighbours.hpp"

using namespace omf5;

namespace {

// D = 5: the smallest admissible descriptor; its genus has very few classes,
// which keeps round-trip tests cheap.
Genus small_genus() {
  IMat seed = seed_search(5, 1, 16);
  return enumerate_genus(seed, 2);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("lattice json round trip") {
  IMat h = hessian_from_coeffs({1, 0, 0, 1, 1, 1, 0, 1, 0, 1, 0, 0, 1, 0, 8});
  GenusSym sym{61, 1};
  std::string text = lattice_to_json(h, &sym);
  CHECK(text.find("\"d_minus\": 61") != std::string::npos);
  CHECK(text.find("\"det\": \"7442\"") != std::string::npos);
  IMat back = lattice_from_json(text);
  CHECK(back == h);

  // the 15-coefficient shorthand is accepted on input
  IMat from_coeffs = lattice_from_json(
      R"({"coeffs": [1, 0, 0, 1, 1, 1, 0, 1, 0, 1, 0, 0, 1, 0, 8]})");
  CHECK(from_coeffs == h);

  CHECK_THROWS_AS(lattice_from_json("{\"dim\": 4}"), OmfError);
  CHECK_THROWS_AS(lattice_from_json("not json"), OmfError);
  CHECK_THROWS_AS(lattice_from_json(R"({"coeffs": [1, 2, 3]})"), OmfError);
}

TEST_CASE("genus json round trip preserves every class") {
  Genus g = small_genus();
  std::string text = genus_to_json(g);
  Genus back = genus_from_json(text);
  CHECK(back.sym.d_minus == g.sym.d_minus);
  CHECK(back.sym.d_plus == g.sym.d_plus);
  CHECK(back.traversal_prime == g.traversal_prime);
  CHECK(back.mass == g.mass);
  REQUIRE(back.classes.size() == g.classes.size());
  for (size_t i = 0; i < g.classes.size(); ++i) {
    CHECK(back.classes[i].hess == g.classes[i].hess);
    CHECK(back.classes[i].from_seed == g.classes[i].from_seed);
    CHECK(back.classes[i].theta == g.classes[i].theta);
    CHECK(back.classes[i].aut.order == g.classes[i].aut.order);
    CHECK(back.classes[i].aut.elements.size() == g.classes[i].aut.elements.size());
  }
}

TEST_CASE("a reloaded genus supports the same computations") {
  Genus g = small_genus();
  Genus back = genus_from_json(genus_to_json(g));
  OMFSpace s1 = build_space(g, 0, 0, 1);
  OMFSpace s2 = build_space(back, 0, 0, 1);
  REQUIRE(s1.dim == s2.dim);
  HeckeOperator t1 = hecke_matrix(s1, 3, 1);
  HeckeOperator t2 = hecke_matrix(s2, 3, 1);
  CHECK(t1.mat == t2.mat);
  CHECK(t1.denom == t2.denom);
}

TEST_CASE("genus json rejects tampered content") {
  Genus g = small_genus();
  std::string text = genus_to_json(g);

  SUBCASE("mass no longer matches the automorphism orders") {
    std::string bad = text;
    auto pos = bad.find("\"mass\":\"");
    REQUIRE(pos != std::string::npos);
    bad.replace(pos, 8, "\"mass\":\"9");
    CHECK_THROWS_WITH_AS(genus_from_json(bad), doctest::Contains("mass"), OmfError);
  }
  SUBCASE("missing field") {
    CHECK_THROWS_WITH_AS(genus_from_json("{\"seed\": [[2]]}"),
                         doctest::Contains("missing field"), OmfError);
  }
}

TEST_CASE("operator json round trip") {
  Genus g = small_genus();
  OMFSpace space = build_space(g, 0, 0, 1);
  HeckeOperator op = hecke_matrix(space, 2, 1);
  std::string ghash = fnv1a_hex(genus_to_json(g));
  std::string text = operator_to_json(op, space, ghash);
  OperatorFile back = operator_from_json(text);
  CHECK(back.d_minus == 5);
  CHECK(back.d_plus == 1);
  CHECK(back.a == 0);
  CHECK(back.b == 0);
  CHECK(back.d == 1);
  CHECK(back.op.p == 2);
  CHECK(back.op.kind == 1);
  CHECK(back.op.mat == op.mat);
  CHECK(back.op.denom == op.denom);
  CHECK(back.genus_hash == ghash);

  CHECK_THROWS_WITH_AS(operator_from_json("{}"), doctest::Contains("missing field"), OmfError);
}

TEST_CASE("congruence report serialization") {
  CongruenceReport rep;
  rep.ell = 43;
  rep.kernel_dim = 1;
  rep.verdict = "collinear";
  rep.vectors = UMat(3, 2);
  u64 vals[3][2] = {{1, 2}, {0, 0}, {5, 10}};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 2; ++c) rep.vectors(r, c) = vals[r][c];
  rep.eigenvalues = {{36, 36}, {7, -1}};

  std::string js = report_to_json(rep, {2, 3});
  CHECK(js.find("\"verdict\": \"collinear\"") != std::string::npos);
  CHECK(js.find("\"ell\": 43") != std::string::npos);
  CHECK(js.find("null") != std::string::npos);  // -1 sentinel becomes null

  std::string csv = report_to_csv(rep, {2, 3});
  CHECK(csv == "p,eigenvalue,block\n2,36,0\n2,36,1\n3,7,0\n3,,1\n");
}

TEST_CASE("result cache stores and verifies payloads") {
  std::string dir = (std::filesystem::temp_directory_path() /
                     ("omf5_cache_test_" + std::to_string(::getpid())))
                        .string();
  std::filesystem::remove_all(dir);
  ResultCache cache(dir);
  REQUIRE(cache.enabled());

  CHECK(!cache.load("k1").has_value());
  cache.store("k1", "{\"x\":1}");
  auto got = cache.load("k1");
  REQUIRE(got.has_value());
  CHECK(*got == "{\"x\":1}");

  SUBCASE("corruption is an error, never a silent recompute") {
    std::string path = cache.path_for("k1");
    std::string raw = slurp(path);
    auto pos = raw.find("{\\\"x\\\":1}");
    REQUIRE(pos != std::string::npos);
    raw.replace(pos + 5, 1, "y");
    std::ofstream(path) << raw;
    CHECK_THROWS_WITH_AS(cache.load("k1"), doctest::Contains("hash mismatch"), OmfError);
  }

  SUBCASE("a disabled cache is inert") {
    ResultCache off("");
    CHECK(!off.enabled());
    CHECK(!off.load("k1").has_value());
    off.store("k1", "payload");  // must not create anything
  }

  std::filesystem::remove_all(dir);
}
