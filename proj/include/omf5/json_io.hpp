// JSON file formats for lattices, genera, and Hecke operators, plus the
// content-hashed result cache shared by CLI invocations.
#pragma once

#include <optional>
#include <string>

#include "omf5/eigen.hpp"
#include "omf5/hecke.hpp"

namespace omf5 {

// Baked into every cache key; bump on changes that affect computed values.
inline constexpr const char* kMathVersion = "1";

// 64-bit FNV-1a content hash rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& s);

// Lattice files: {"dim":5, "hessian":[[...]]}; a 15-entry upper-triangle
// coefficient list {"coeffs":[...]} is also accepted on input.
std::string lattice_to_json(const IMat& h, const GenusSym* sym = nullptr);
IMat lattice_from_json(const std::string& text);

// Genus cache files: seed, symbol, traversal prime, class Hessians with
// seed-coordinate bases, automorphisms, and theta prefixes.
std::string genus_to_json(const Genus& g);
Genus genus_from_json(const std::string& text);

// Operator files: descriptor {D_minus, D_plus, a, b, d, p, kind}, the
// integer matrix with its denominator, and the genus content hash.
struct OperatorFile {
  i64 d_minus = 1, d_plus = 1;
  int a = 0, b = 0;
  i64 d = 1;
  HeckeOperator op;
  std::string genus_hash;
};
std::string operator_to_json(const HeckeOperator& op, const OMFSpace& space,
                             const std::string& genus_hash);
OperatorFile operator_from_json(const std::string& text);

// Congruence reports: verdict, ell, dimensions, eigenvalue tables.
std::string report_to_json(const CongruenceReport& rep, const std::vector<i64>& op_primes);
std::string report_to_csv(const CongruenceReport& rep, const std::vector<i64>& op_primes);

// Directory cache of JSON payloads addressed by a logical key; every file
// carries an FNV-1a hash of its payload, verified on load (a mismatch is an
// inconsistency, never a silent recompute).
class ResultCache {
 public:
  explicit ResultCache(std::string dir) : dir_(std::move(dir)) {}
  bool enabled() const { return !dir_.empty(); }
  std::optional<std::string> load(const std::string& key) const;
  void store(const std::string& key, const std::string& payload) const;
  std::string path_for(const std::string& key) const;

 private:
  std::string dir_;
};

// OMF5_CACHE_DIR, or empty when unset (cache disabled).
std::string cache_dir_from_env();

}  // namespace omf5
