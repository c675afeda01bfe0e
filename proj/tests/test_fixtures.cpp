// Newform fixture loading and lift eigenvalue formulas.
#include <string>

#include "doctest.h"
#include "omf5/fixtures.hpp"

using namespace omf5;

namespace {

std::string fixture_path(const std::string& name) {
  return std::string(OMF5_FIXTURE_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("rational fixtures carry the printed q-expansions") {
  NewformFixture g = load_fixture(fixture_path("19.6.a.a.json"));
  CHECK(g.label == "19.6.a.a");
  CHECK(g.level == 19);
  CHECK(g.weight == 6);
  CHECK(g.ap.at(2) == -6);
  CHECK(g.ap.at(3) == 4);
  CHECK(g.ap.at(5) == 54);
  CHECK(g.al_signs.at(19) == -1);
  CHECK_FALSE(g.ap_mod.has_value());

  NewformFixture h = load_fixture(fixture_path("13.4.a.a.json"));
  CHECK(h.ap.at(2) == -5);
  CHECK(h.ap.at(3) == -7);
  CHECK(h.ap.at(5) == -7);
  CHECK(h.al_signs.at(13) == -1);
}

TEST_CASE("residue fixtures store eigenvalues mod ell") {
  NewformFixture f = load_fixture(fixture_path("61.4.a.a.json"));
  REQUIRE(f.ap_mod.has_value());
  CHECK(f.ap_mod->ell == 43);
  CHECK(f.ap_mod->values.at(2) == 30);
  CHECK(f.ap.empty());

  NewformFixture g = load_fixture(fixture_path("61.2.a.b.json"));
  REQUIRE(g.ap_mod.has_value());
  CHECK(g.ap_mod->ell == 19);
  CHECK(g.ap_mod->values.at(2) == 11);

  NewformFixture h = load_fixture(fixture_path("37.4.a.a.json"));
  REQUIRE(h.ap_mod.has_value());
  CHECK(h.ap_mod->ell == 19);
  CHECK(h.ap_mod->values.size() == 6);
}

TEST_CASE("fixture error cases are distinct") {
  // missing file
  CHECK_THROWS_WITH_AS((void)load_fixture(fixture_path("nope.json")),
                       doctest::Contains("fixture file missing"), OmfError);
  // schema violations
  auto schema_err = [](const std::string& text) {
    try {
      (void)parse_fixture(text);
      return false;
    } catch (const OmfError& e) {
      return e.kind == ErrKind::InvalidInput &&
             std::string(e.what()).find("fixture schema") != std::string::npos;
    }
  };
  CHECK(schema_err("not json at all"));
  CHECK(schema_err(R"({"level": 5, "weight": 4, "ap": {"2": 1}})"));  // no label
  CHECK(schema_err(R"({"label": "x", "level": 5, "weight": 4, "ap": {"4": 1}})"));
  CHECK(schema_err(R"({"label": "x", "level": 5, "weight": 4})"));  // no eigenvalues
  CHECK(schema_err(R"({"label": "x", "level": 5, "weight": 4, "ap": {"2": 1}, "al_signs": {"5": 2}})"));
  CHECK(schema_err(R"({"label": "x", "level": 5, "weight": 4, "ap": {"2": 1}, "al_signs": {"3": 1}})"));
  CHECK(schema_err(
      R"({"label": "x", "level": 5, "weight": 4, "ap_mod": {"ell": 7, "values": {"2": 9}}})"));
  // Ramanujan violation is an inconsistency, not a schema error
  try {
    (void)parse_fixture(R"({"label": "x", "level": 11, "weight": 2, "ap": {"2": 3}})");
    CHECK(false);
  } catch (const OmfError& e) {
    CHECK(e.kind == ErrKind::Inconsistency);
    CHECK(std::string(e.what()).find("ramanujan") != std::string::npos);
  }
}

TEST_CASE("eigenvalues beyond word size parse from strings") {
  NewformFixture f = parse_fixture(
      R"({"label": "big", "level": 3, "weight": 200, "ap": {"2": "123456789012345678901234567890"}})");
  CHECK(f.ap.at(2) == mpz_class("123456789012345678901234567890"));
}

TEST_CASE("Saito-Kurokawa eigenvalue formula") {
  CHECK(sk_eigenvalue(2, -6, 3, 0) == 0);
  CHECK(sk_eigenvalue(3, 4, 3, 0) == 16);
  CHECK(sk_eigenvalue(2, -7, 3, 0) == -1);
  // the 61/43 block: a_2 = 30 mod 43 gives eigenvalue -7 mod 43
  mpz_class lam = sk_eigenvalue(2, 30, 3, 0);
  CHECK(mpz_fdiv_ui(lam.get_mpz_t(), 43) == 36);
  // weight translation: k=3, j=2 uses p + p^4
  CHECK(sk_eigenvalue(2, -6, 3, 2) == -6 + 2 + 16);
  CHECK_THROWS_AS((void)sk_eigenvalue(4, 1, 3, 0), OmfError);
}

TEST_CASE("Yoshida eigenvalue formula") {
  CHECK(yoshida_eigenvalue(2, -5, -6, 0) == -16);
  // mod 7 this equals the weight-(3,2) congruence value a_2 + 2 + 2^4
  CHECK(mpz_fdiv_ui(mpz_class(-16).get_mpz_t(), 7) == 5);
  CHECK(mpz_fdiv_ui(mpz_class(-6 + 2 + 16).get_mpz_t(), 7) == 5);
  CHECK(yoshida_eigenvalue(5, 0, 0, 3) == 0);
  CHECK(yoshida_eigenvalue(3, 2, 1, 1) == 1 + 9 * 2);
  CHECK_THROWS_AS((void)yoshida_eigenvalue(6, 1, 1, 0), OmfError);
}

TEST_CASE("Eisenstein congruence prerequisite") {
  NewformFixture h13 = load_fixture(fixture_path("13.4.a.a.json"));
  CHECK(eisenstein_congruent(h13, 7));
  CHECK_FALSE(eisenstein_congruent(h13, 5));
  NewformFixture h37 = load_fixture(fixture_path("37.4.a.a.json"));
  CHECK(eisenstein_congruent(h37, 19));
  NewformFixture g19 = load_fixture(fixture_path("19.6.a.a.json"));
  CHECK_FALSE(eisenstein_congruent(g19, 7));
}
