// Elementary number theory over machine words: modular arithmetic,
// deterministic Miller-Rabin, Jacobi symbols, valuations.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace omf5 {

using i64 = long;
using u64 = unsigned long;
using i128 = __int128;
using u128 = unsigned __int128;

// Error taxonomy shared by the whole library.  The CLI maps the kinds to
// process exit codes (invalid input -> 2, no genus -> 3, inconsistency -> 4).
enum class ErrKind { InvalidInput, NoGenus, Inconsistency };

struct OmfError : std::runtime_error {
  ErrKind kind;
  OmfError(ErrKind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

[[noreturn]] inline void fail_invalid(const std::string& m) { throw OmfError(ErrKind::InvalidInput, m); }
[[noreturn]] inline void fail_nogenus(const std::string& m) { throw OmfError(ErrKind::NoGenus, m); }
[[noreturn]] inline void fail_inconsistent(const std::string& m) { throw OmfError(ErrKind::Inconsistency, m); }

inline void check(bool ok, const std::string& m) {
  if (!ok) fail_inconsistent(m);
}

inline i64 gcd_i64(i64 a, i64 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) { i64 t = a % b; a = b; b = t; }
  return a;
}

// g = gcd(a,b) and x,y with a*x + b*y = g.
inline i64 extgcd_i64(i64 a, i64 b, i64& x, i64& y) {
  if (b == 0) { x = (a >= 0) ? 1 : -1; y = 0; return a >= 0 ? a : -a; }
  i64 x1, y1;
  i64 g = extgcd_i64(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

inline u64 mulmod_u64(u64 a, u64 b, u64 m) { return (u64)((u128)a * b % m); }

inline u64 addmod_u64(u64 a, u64 b, u64 m) {
  u64 s = a + b;
  if (s >= m || s < a) s -= m;
  return s;
}

inline u64 submod_u64(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }

inline u64 powmod_u64(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

inline u64 invmod_u64(u64 a, u64 m) {
  i64 x, y;
  i64 g = extgcd_i64((i64)(a % m), (i64)m, x, y);
  if (g != 1) fail_inconsistent("invmod: not invertible");
  i64 r = x % (i64)m;
  if (r < 0) r += (i64)m;
  return (u64)r;
}

// Reduce a signed value into [0, m).
inline u64 mod_i64(i64 a, u64 m) {
  i64 r = a % (i64)m;
  if (r < 0) r += (i64)m;
  return (u64)r;
}

inline bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  // Deterministic for all 64-bit inputs with this witness set.
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = powmod_u64(a % n, d, n);
    if (x == 0 || x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) { composite = false; break; }
    }
    if (composite) return false;
  }
  return true;
}

inline u64 next_prime_u64(u64 n) {
  if (n < 2) return 2;
  ++n;
  if (n % 2 == 0) ++n;
  while (!is_prime_u64(n)) n += 2;
  return n;
}

// Jacobi symbol (a/n) for odd n > 0.
inline int jacobi_i64(i64 a, i64 n) {
  if (n <= 0 || n % 2 == 0) fail_invalid("jacobi: modulus must be positive odd");
  a %= n;
  if (a < 0) a += n;
  int t = 1;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      i64 r = n % 8;
      if (r == 3 || r == 5) t = -t;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) t = -t;
    a %= n;
  }
  return n == 1 ? t : 0;
}

inline int valuation_i64(i64& n, i64 p) {
  int v = 0;
  while (n != 0 && n % p == 0) { n /= p; ++v; }
  return v;
}

inline int valuation(i64 n, i64 p) {
  i64 m = n;
  return valuation_i64(m, p);
}

inline std::vector<i64> prime_factors(i64 n) {
  if (n < 0) n = -n;
  std::vector<i64> ps;
  for (i64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      ps.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) ps.push_back(n);
  return ps;
}

inline bool is_squarefree_i64(i64 n) {
  if (n == 0) return false;
  if (n < 0) n = -n;
  for (i64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % (p * p) == 0) return false;
    while (n % p == 0) n /= p;
  }
  return true;
}

}  // namespace omf5
