#include "omf5/json_io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace omf5 {

namespace {

using nlohmann::json;

json imat_to_json(const IMat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

IMat imat_from_json(const json& rows, const char* what) {
  if (!rows.is_array() || rows.empty()) fail_invalid(std::string(what) + ": expected a matrix");
  int r = (int)rows.size();
  int c = (int)rows[0].size();
  IMat m(r, c);
  for (int i = 0; i < r; ++i) {
    if (!rows[i].is_array() || (int)rows[i].size() != c)
      fail_invalid(std::string(what) + ": ragged matrix");
    for (int j = 0; j < c; ++j) {
      if (!rows[i][j].is_number_integer()) fail_invalid(std::string(what) + ": non-integer entry");
      m(i, j) = rows[i][j].get<i64>();
    }
  }
  return m;
}

json qmat_to_json(const QMat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j).get_str());
    rows.push_back(std::move(row));
  }
  return rows;
}

QMat qmat_from_json(const json& rows, const char* what) {
  if (!rows.is_array() || rows.empty()) fail_invalid(std::string(what) + ": expected a matrix");
  int r = (int)rows.size();
  int c = (int)rows[0].size();
  QMat m(r, c);
  for (int i = 0; i < r; ++i) {
    if (!rows[i].is_array() || (int)rows[i].size() != c)
      fail_invalid(std::string(what) + ": ragged matrix");
    for (int j = 0; j < c; ++j) {
      if (!rows[i][j].is_string()) fail_invalid(std::string(what) + ": expected rational strings");
      mpq_class q;
      if (q.set_str(rows[i][j].get<std::string>(), 10) != 0)
        fail_invalid(std::string(what) + ": bad rational " + rows[i][j].get<std::string>());
      q.canonicalize();
      m(i, j) = q;
    }
  }
  return m;
}

json zmat_to_json(const ZMat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j).get_str());
    rows.push_back(std::move(row));
  }
  return rows;
}

ZMat zmat_from_json(const json& rows, const char* what) {
  if (!rows.is_array() || rows.empty()) fail_invalid(std::string(what) + ": expected a matrix");
  int r = (int)rows.size();
  int c = (int)rows[0].size();
  ZMat m(r, c);
  for (int i = 0; i < r; ++i) {
    if (!rows[i].is_array() || (int)rows[i].size() != c)
      fail_invalid(std::string(what) + ": ragged matrix");
    for (int j = 0; j < c; ++j) {
      if (!rows[i][j].is_string()) fail_invalid(std::string(what) + ": expected integer strings");
      mpz_class z;
      if (z.set_str(rows[i][j].get<std::string>(), 10) != 0)
        fail_invalid(std::string(what) + ": bad integer " + rows[i][j].get<std::string>());
      m(i, j) = z;
    }
  }
  return m;
}

json parse_or_die(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail_invalid(std::string(what) + ": not valid JSON");
  return j;
}

}  // namespace

std::string fnv1a_hex(const std::string& s) {
  u64 h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016lx", h);
  return std::string(buf);
}

std::string lattice_to_json(const IMat& h, const GenusSym* sym) {
  json j;
  j["dim"] = 5;
  j["hessian"] = imat_to_json(h);
  if (sym) {
    j["descriptor"]["d_minus"] = sym->d_minus;
    j["descriptor"]["d_plus"] = sym->d_plus;
    j["descriptor"]["det"] = form_determinant(h).get_str();
  }
  return j.dump(2) + "\n";
}

IMat lattice_from_json(const std::string& text) {
  json j = parse_or_die(text, "lattice");
  if (j.contains("coeffs")) {
    if (!j["coeffs"].is_array() || j["coeffs"].size() != 15)
      fail_invalid("lattice: 'coeffs' must hold 15 integers");
    std::vector<i64> a;
    for (const auto& v : j["coeffs"]) {
      if (!v.is_number_integer()) fail_invalid("lattice: non-integer coefficient");
      a.push_back(v.get<i64>());
    }
    IMat h = hessian_from_coeffs(a);
    require_form(h);
    return h;
  }
  if (!j.contains("dim") || j["dim"] != 5 || !j.contains("hessian"))
    fail_invalid("lattice: expected {\"dim\":5,\"hessian\":[[...]]} or {\"coeffs\":[...]}");
  IMat h = imat_from_json(j["hessian"], "lattice");
  if (h.rows() != 5 || h.cols() != 5) fail_invalid("lattice: hessian must be 5x5");
  require_form(h);
  return h;
}

std::string genus_to_json(const Genus& g) {
  json j;
  j["seed"] = imat_to_json(g.seed);
  j["symbol"]["d_minus"] = g.sym.d_minus;
  j["symbol"]["d_plus"] = g.sym.d_plus;
  j["traversal_prime"] = g.traversal_prime;
  j["mass"] = g.mass.get_str();
  json classes = json::array();
  for (const GenusClass& c : g.classes) {
    json cj;
    cj["hessian"] = imat_to_json(c.hess);
    cj["from_seed"] = qmat_to_json(c.from_seed);
    cj["theta"] = c.theta;
    cj["aut_order"] = c.aut.order;
    cj["aut_proper_order"] = c.aut.proper_order;
    json gens = json::array();
    for (const IMat& m : c.aut.generators) gens.push_back(imat_to_json(m));
    cj["aut_generators"] = std::move(gens);
    json els = json::array();
    for (const IMat& m : c.aut.elements) els.push_back(imat_to_json(m));
    cj["aut_elements"] = std::move(els);
    classes.push_back(std::move(cj));
  }
  j["classes"] = std::move(classes);
  return j.dump() + "\n";
}

Genus genus_from_json(const std::string& text) {
  json j = parse_or_die(text, "genus");
  for (const char* key : {"seed", "symbol", "traversal_prime", "mass", "classes"})
    if (!j.contains(key)) fail_invalid(std::string("genus: missing field '") + key + "'");
  Genus g;
  g.seed = imat_from_json(j["seed"], "genus seed");
  g.sym.d_minus = j["symbol"]["d_minus"].get<i64>();
  g.sym.d_plus = j["symbol"]["d_plus"].get<i64>();
  g.traversal_prime = j["traversal_prime"].get<i64>();
  mpq_class mass;
  if (mass.set_str(j["mass"].get<std::string>(), 10) != 0) fail_invalid("genus: bad mass");
  mass.canonicalize();
  g.mass = mass;
  if (!j["classes"].is_array() || j["classes"].empty()) fail_invalid("genus: no classes");
  mpq_class mass_check = 0;
  for (const json& cj : j["classes"]) {
    GenusClass c;
    c.hess = imat_from_json(cj["hessian"], "genus class");
    c.from_seed = qmat_from_json(cj["from_seed"], "genus basis");
    c.theta = cj["theta"].get<std::vector<i64>>();
    c.aut.order = cj["aut_order"].get<i64>();
    c.aut.proper_order = cj["aut_proper_order"].get<i64>();
    for (const json& m : cj["aut_generators"]) c.aut.generators.push_back(imat_from_json(m, "aut"));
    for (const json& m : cj["aut_elements"]) c.aut.elements.push_back(imat_from_json(m, "aut"));
    // integrity: the stored basis must transport the seed form to the class
    QMat hs = to_q(g.seed);
    QMat lhs = c.from_seed.transpose() * hs * c.from_seed;
    if (lhs != to_q(c.hess)) fail_inconsistent("genus: stored basis does not match its class form");
    if ((i64)c.aut.elements.size() != c.aut.order)
      fail_inconsistent("genus: automorphism list does not match its order");
    mass_check += mpq_class(1, c.aut.order);
    g.classes.push_back(std::move(c));
  }
  if (mass_check != g.mass) fail_inconsistent("genus: mass does not match automorphism orders");
  return g;
}

std::string operator_to_json(const HeckeOperator& op, const OMFSpace& space,
                             const std::string& genus_hash) {
  json j;
  j["descriptor"]["d_minus"] = space.genus->sym.d_minus;
  j["descriptor"]["d_plus"] = space.genus->sym.d_plus;
  j["descriptor"]["a"] = space.a;
  j["descriptor"]["b"] = space.b;
  j["descriptor"]["d"] = space.d;
  j["descriptor"]["p"] = op.p;
  j["descriptor"]["kind"] = op.kind;
  j["denom"] = op.denom.get_str();
  j["matrix"] = zmat_to_json(op.mat);
  j["genus_hash"] = genus_hash;
  return j.dump() + "\n";
}

OperatorFile operator_from_json(const std::string& text) {
  json j = parse_or_die(text, "operator");
  for (const char* key : {"descriptor", "denom", "matrix", "genus_hash"})
    if (!j.contains(key)) fail_invalid(std::string("operator: missing field '") + key + "'");
  const json& d = j["descriptor"];
  OperatorFile f;
  f.d_minus = d["d_minus"].get<i64>();
  f.d_plus = d["d_plus"].get<i64>();
  f.a = d["a"].get<int>();
  f.b = d["b"].get<int>();
  f.d = d["d"].get<i64>();
  f.op.p = d["p"].get<i64>();
  f.op.kind = d["kind"].get<int>();
  mpz_class den;
  if (den.set_str(j["denom"].get<std::string>(), 10) != 0 || den == 0)
    fail_invalid("operator: bad denominator");
  f.op.denom = den;
  f.op.mat = zmat_from_json(j["matrix"], "operator matrix");
  if (f.op.mat.rows() != f.op.mat.cols()) fail_invalid("operator: matrix must be square");
  f.genus_hash = j["genus_hash"].get<std::string>();
  return f;
}

std::string report_to_json(const CongruenceReport& rep, const std::vector<i64>& op_primes) {
  json j;
  j["verdict"] = rep.verdict;
  j["ell"] = rep.ell;
  j["kernel_dim"] = rep.kernel_dim;
  j["count"] = rep.vectors.cols();
  json vecs = json::array();
  for (int c = 0; c < rep.vectors.cols(); ++c) {
    json v = json::array();
    for (int r = 0; r < rep.vectors.rows(); ++r) v.push_back(rep.vectors(r, c));
    vecs.push_back(std::move(v));
  }
  j["vectors_mod_ell"] = std::move(vecs);
  json tables = json::array();
  for (size_t t = 0; t < rep.eigenvalues.size(); ++t) {
    json row = json::array();
    for (i64 e : rep.eigenvalues[t]) {
      if (e < 0)
        row.push_back(nullptr);
      else
        row.push_back(e);
    }
    tables.push_back({{"p", op_primes.at(t)}, {"values", std::move(row)}});
  }
  j["eigenvalues_mod_ell"] = std::move(tables);
  return j.dump(2) + "\n";
}

std::string report_to_csv(const CongruenceReport& rep, const std::vector<i64>& op_primes) {
  std::ostringstream out;
  out << "p,eigenvalue,block\n";
  for (size_t t = 0; t < rep.eigenvalues.size(); ++t)
    for (size_t b = 0; b < rep.eigenvalues[t].size(); ++b) {
      out << op_primes.at(t) << ",";
      if (rep.eigenvalues[t][b] >= 0) out << rep.eigenvalues[t][b];
      out << "," << b << "\n";
    }
  return out.str();
}

std::optional<std::string> ResultCache::load(const std::string& key) const {
  if (!enabled()) return std::nullopt;
  std::ifstream in(path_for(key));
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  json j = parse_or_die(buf.str(), "cache file");
  if (!j.contains("key") || !j.contains("hash") || !j.contains("payload"))
    fail_inconsistent("cache file malformed: " + path_for(key));
  if (j["key"].get<std::string>() != key)
    fail_inconsistent("cache key mismatch in " + path_for(key));
  std::string payload = j["payload"].get<std::string>();
  if (fnv1a_hex(payload) != j["hash"].get<std::string>())
    fail_inconsistent("cache content hash mismatch in " + path_for(key));
  return payload;
}

void ResultCache::store(const std::string& key, const std::string& payload) const {
  if (!enabled()) return;
  std::filesystem::create_directories(dir_);
  json j;
  j["key"] = key;
  j["hash"] = fnv1a_hex(payload);
  j["payload"] = payload;
  std::ofstream out(path_for(key));
  if (!out) fail_invalid("cache: cannot write " + path_for(key));
  out << j.dump() << "\n";
}

std::string ResultCache::path_for(const std::string& key) const {
  return dir_ + "/" + fnv1a_hex(key) + ".json";
}

std::string cache_dir_from_env() {
  const char* v = std::getenv("OMF5_CACHE_DIR");
  return v ? std::string(v) : std::string();
}

}  // namespace omf5
