#include "omf5/fixtures.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace omf5 {

namespace {

using nlohmann::json;

[[noreturn]] void fail_schema(const std::string& what) {
  fail_invalid("fixture schema: " + what);
}

i64 parse_prime_key(const std::string& key, const char* where) {
  i64 p = 0;
  try {
    size_t pos = 0;
    p = std::stol(key, &pos);
    if (pos != key.size()) fail_schema(std::string(where) + " key is not an integer: " + key);
  } catch (const std::logic_error&) {
    fail_schema(std::string(where) + " key is not an integer: " + key);
  }
  if (p < 2 || !is_prime_u64((u64)p))
    fail_schema(std::string(where) + " key is not prime: " + key);
  return p;
}

mpz_class parse_bigint(const json& v, const char* where) {
  if (v.is_number_integer()) return mpz_class((long)v.get<std::int64_t>());
  if (v.is_string()) {
    mpz_class z;
    if (z.set_str(v.get<std::string>(), 10) != 0)
      fail_schema(std::string(where) + " value is not an integer: " + v.get<std::string>());
    return z;
  }
  fail_schema(std::string(where) + " value must be an integer or decimal string");
}

void check_ramanujan(const NewformFixture& f) {
  // |a_p| <= 2 p^{(w-1)/2}, squared to stay in exact arithmetic
  for (const auto& [p, ap] : f.ap) {
    mpz_class bound;
    mpz_ui_pow_ui(bound.get_mpz_t(), (unsigned long)p, (unsigned long)(f.weight - 1));
    if (ap * ap > 4 * bound)
      fail_inconsistent("fixture ramanujan: |a_" + std::to_string(p) + "| exceeds 2 p^{(w-1)/2} in " +
                        f.label);
  }
}

}  // namespace

NewformFixture parse_fixture(const std::string& json_text) {
  json j = json::parse(json_text, nullptr, false);
  if (j.is_discarded()) fail_schema("not valid JSON");
  if (!j.is_object()) fail_schema("top level must be an object");

  NewformFixture f;
  if (!j.contains("label") || !j["label"].is_string()) fail_schema("missing string field 'label'");
  f.label = j["label"].get<std::string>();
  if (!j.contains("level") || !j["level"].is_number_integer() || j["level"].get<i64>() < 1)
    fail_schema("missing positive integer field 'level'");
  f.level = j["level"].get<i64>();
  if (!j.contains("weight") || !j["weight"].is_number_integer() || j["weight"].get<int>() < 2)
    fail_schema("missing integer field 'weight' >= 2");
  f.weight = j["weight"].get<int>();
  if (j.contains("source")) {
    if (!j["source"].is_string()) fail_schema("'source' must be a string");
    f.source = j["source"].get<std::string>();
  }

  if (j.contains("ap")) {
    if (!j["ap"].is_object()) fail_schema("'ap' must be an object");
    for (const auto& [key, val] : j["ap"].items())
      f.ap[parse_prime_key(key, "ap")] = parse_bigint(val, "ap");
  }
  if (j.contains("ap_mod")) {
    const json& m = j["ap_mod"];
    if (!m.is_object() || !m.contains("ell") || !m.contains("values") || !m["values"].is_object())
      fail_schema("'ap_mod' must hold 'ell' and a 'values' object");
    if (!m["ell"].is_number_integer() || m["ell"].get<i64>() < 2 ||
        !is_prime_u64((u64)m["ell"].get<i64>()))
      fail_schema("'ap_mod.ell' must be prime");
    ApResidues r;
    r.ell = (u64)m["ell"].get<i64>();
    for (const auto& [key, val] : m["values"].items()) {
      i64 p = parse_prime_key(key, "ap_mod.values");
      mpz_class v = parse_bigint(val, "ap_mod.values");
      if (v < 0 || v >= (long)r.ell) fail_schema("'ap_mod' residue out of range at p=" + key);
      r.values[p] = v.get_ui();
    }
    f.ap_mod = std::move(r);
  }
  if (f.ap.empty() && !f.ap_mod) fail_schema("fixture carries neither 'ap' nor 'ap_mod'");

  if (j.contains("al_signs")) {
    if (!j["al_signs"].is_object()) fail_schema("'al_signs' must be an object");
    for (const auto& [key, val] : j["al_signs"].items()) {
      i64 p = parse_prime_key(key, "al_signs");
      if (f.level % p != 0) fail_schema("al_signs key does not divide the level: " + key);
      if (!val.is_number_integer() || (val.get<int>() != 1 && val.get<int>() != -1))
        fail_schema("al_signs values must be +1 or -1");
      f.al_signs[p] = val.get<int>();
    }
  }

  check_ramanujan(f);
  return f;
}

NewformFixture load_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_invalid("fixture file missing: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_fixture(buf.str());
}

mpz_class sk_eigenvalue(i64 p, const mpz_class& ap, int k, int j) {
  if (p < 2 || !is_prime_u64((u64)p)) fail_invalid("sk_eigenvalue: p must be prime");
  if (k < 2 || j < 0) fail_invalid("sk_eigenvalue: weight out of range");
  mpz_class lo, hi;
  mpz_ui_pow_ui(lo.get_mpz_t(), (unsigned long)p, (unsigned long)(k - 2));
  mpz_ui_pow_ui(hi.get_mpz_t(), (unsigned long)p, (unsigned long)(j + k - 1));
  return ap + lo + hi;
}

mpz_class yoshida_eigenvalue(i64 p, const mpz_class& ap_g, const mpz_class& ap_h, int b) {
  if (p < 2 || !is_prime_u64((u64)p)) fail_invalid("yoshida_eigenvalue: p must be prime");
  if (b < 0) fail_invalid("yoshida_eigenvalue: b must be nonnegative");
  mpz_class pw;
  mpz_ui_pow_ui(pw.get_mpz_t(), (unsigned long)p, (unsigned long)(b + 1));
  return ap_h + pw * ap_g;
}

bool eisenstein_congruent(const NewformFixture& f, u64 ell) {
  auto expected = [&](i64 p) {
    mpz_class e;
    mpz_ui_pow_ui(e.get_mpz_t(), (unsigned long)p, (unsigned long)(f.weight - 1));
    e += 1;
    return mpz_fdiv_ui(e.get_mpz_t(), ell);
  };
  for (const auto& [p, ap] : f.ap) {
    if (f.level % p == 0 || (u64)p == ell) continue;
    if (mpz_fdiv_ui(ap.get_mpz_t(), ell) != expected(p)) return false;
  }
  if (f.ap_mod) {
    if (f.ap_mod->ell != ell) return false;
    for (const auto& [p, r] : f.ap_mod->values) {
      if (f.level % p == 0 || (u64)p == ell) continue;
      if (r != expected(p)) return false;
    }
  }
  return true;
}

}  // namespace omf5
