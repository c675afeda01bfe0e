#include "omf5/poly.hpp"

#include <algorithm>

namespace omf5 {

void zp_normalize(ZPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int zp_deg(const ZPoly& f) { return (int)f.size() - 1; }

bool zp_is_zero(const ZPoly& f) { return f.empty(); }

ZPoly zp_from(const std::vector<long>& cs) {
  ZPoly f(cs.size());
  for (size_t i = 0; i < cs.size(); ++i) f[i] = cs[i];
  zp_normalize(f);
  return f;
}

ZPoly zp_add(const ZPoly& f, const ZPoly& g) {
  ZPoly h(std::max(f.size(), g.size()));
  for (size_t i = 0; i < h.size(); ++i) {
    if (i < f.size()) h[i] += f[i];
    if (i < g.size()) h[i] += g[i];
  }
  zp_normalize(h);
  return h;
}

ZPoly zp_sub(const ZPoly& f, const ZPoly& g) {
  ZPoly h(std::max(f.size(), g.size()));
  for (size_t i = 0; i < h.size(); ++i) {
    if (i < f.size()) h[i] += f[i];
    if (i < g.size()) h[i] -= g[i];
  }
  zp_normalize(h);
  return h;
}

ZPoly zp_neg(ZPoly f) {
  for (auto& c : f) c = -c;
  return f;
}

ZPoly zp_mul(const ZPoly& f, const ZPoly& g) {
  if (f.empty() || g.empty()) return {};
  ZPoly h(f.size() + g.size() - 1);
  for (size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0) continue;
    for (size_t j = 0; j < g.size(); ++j) h[i + j] += f[i] * g[j];
  }
  zp_normalize(h);
  return h;
}

ZPoly zp_scale(const ZPoly& f, const mpz_class& c) {
  if (c == 0) return {};
  ZPoly h = f;
  for (auto& x : h) x *= c;
  return h;
}

bool zp_divide_exact(const ZPoly& f, const ZPoly& g, ZPoly& quo) {
  quo.clear();
  if (zp_is_zero(g)) return false;
  if (zp_is_zero(f)) return true;
  int df = zp_deg(f), dg = zp_deg(g);
  if (df < dg) return false;
  std::vector<mpq_class> rem(f.size());
  for (size_t i = 0; i < f.size(); ++i) rem[i] = mpq_class(f[i]);
  std::vector<mpq_class> q(df - dg + 1);
  mpq_class lead(g[dg]);
  for (int k = df - dg; k >= 0; --k) {
    mpq_class c = rem[k + dg] / lead;
    q[k] = c;
    if (c != 0)
      for (int j = 0; j <= dg; ++j) rem[k + j] -= c * mpq_class(g[j]);
  }
  for (const auto& r : rem)
    if (r != 0) return false;
  quo.resize(q.size());
  for (size_t i = 0; i < q.size(); ++i) {
    if (q[i].get_den() != 1) return false;
    quo[i] = q[i].get_num();
  }
  zp_normalize(quo);
  return true;
}

mpz_class zp_content(const ZPoly& f) {
  mpz_class g = 0;
  for (const auto& c : f) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

ZPoly zp_primitive(const ZPoly& f) {
  if (zp_is_zero(f)) return {};
  mpz_class c = zp_content(f);
  if (f.back() < 0) c = -c;
  ZPoly h(f.size());
  for (size_t i = 0; i < f.size(); ++i) h[i] = f[i] / c;
  return h;
}

ZPoly zp_derivative(const ZPoly& f) {
  if (f.size() <= 1) return {};
  ZPoly h(f.size() - 1);
  for (size_t i = 1; i < f.size(); ++i) h[i - 1] = f[i] * (long)i;
  zp_normalize(h);
  return h;
}

mpz_class zp_eval(const ZPoly& f, const mpz_class& x) {
  mpz_class v = 0;
  for (size_t i = f.size(); i-- > 0;) v = v * x + f[i];
  return v;
}

u64 zp_eval_mod(const ZPoly& f, u64 x, u64 q) {
  u64 v = 0;
  mpz_class t;
  for (size_t i = f.size(); i-- > 0;) {
    t = f[i] % (long)q;
    if (t < 0) t += (long)q;
    v = addmod_u64(mulmod_u64(v, x, q), t.get_ui(), q);
  }
  return v;
}

ZPoly zp_compose_linear(const ZPoly& f, const mpz_class& a, const mpz_class& b) {
  // Horner: start from the top coefficient, repeatedly multiply by (a + b y).
  ZPoly acc;
  for (size_t i = f.size(); i-- > 0;) {
    ZPoly next(acc.size() + 1);
    for (size_t j = 0; j < acc.size(); ++j) {
      next[j] += acc[j] * a;
      next[j + 1] += acc[j] * b;
    }
    if (next.empty()) next.resize(1);
    next[0] += f[i];
    zp_normalize(next);
    acc = std::move(next);
  }
  return acc;
}

// Pseudo-remainder of f by g.
static ZPoly zp_prem(ZPoly f, const ZPoly& g) {
  int dg = zp_deg(g);
  const mpz_class& lg = g[dg];
  while (!zp_is_zero(f) && zp_deg(f) >= dg) {
    int df = zp_deg(f);
    mpz_class c = f[df];
    ZPoly nf(f.size());
    for (int i = 0; i <= df; ++i) nf[i] = f[i] * lg;
    for (int j = 0; j <= dg; ++j) nf[df - dg + j] -= c * g[j];
    zp_normalize(nf);
    f = std::move(nf);
  }
  return f;
}

ZPoly zp_gcd(const ZPoly& f0, const ZPoly& g0) {
  if (zp_is_zero(f0)) return zp_primitive(g0);
  if (zp_is_zero(g0)) return zp_primitive(f0);
  ZPoly f = zp_primitive(f0), g = zp_primitive(g0);
  if (zp_deg(f) < zp_deg(g)) std::swap(f, g);
  while (!zp_is_zero(g)) {
    ZPoly r = zp_primitive(zp_prem(f, g));
    f = std::move(g);
    g = std::move(r);
  }
  return zp_primitive(f);
}

// ---- arithmetic mod a word prime ----------------------------------------

MPoly mp_reduce(const ZPoly& f, u64 q) {
  MPoly r(f.size());
  mpz_class t;
  for (size_t i = 0; i < f.size(); ++i) {
    t = f[i] % (long)q;
    if (t < 0) t += (long)q;
    r[i] = t.get_ui();
  }
  mp_normalize(r);
  return r;
}

void mp_normalize(MPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int mp_deg(const MPoly& f) { return (int)f.size() - 1; }

MPoly mp_mul(const MPoly& f, const MPoly& g, u64 q) {
  if (f.empty() || g.empty()) return {};
  MPoly h(f.size() + g.size() - 1, 0);
  for (size_t i = 0; i < f.size(); ++i) {
    if (!f[i]) continue;
    for (size_t j = 0; j < g.size(); ++j)
      h[i + j] = addmod_u64(h[i + j], mulmod_u64(f[i], g[j], q), q);
  }
  mp_normalize(h);
  return h;
}

MPoly mp_rem(MPoly f, const MPoly& g, u64 q) {
  int dg = mp_deg(g);
  if (dg < 0) fail_invalid("mp_rem: division by zero polynomial");
  if (mp_deg(f) < dg) return f;
  u64 inv = invmod_u64(g[dg], q);
  while (mp_deg(f) >= dg) {
    int df = mp_deg(f);
    u64 c = mulmod_u64(f[df], inv, q);
    if (c)
      for (int j = 0; j <= dg; ++j)
        f[df - dg + j] = submod_u64(f[df - dg + j], mulmod_u64(c, g[j], q), q);
    f.resize(df);  // top coefficient is now zero by construction
    mp_normalize(f);
  }
  return f;
}

// Exact quotient f / g mod q; raises if the division has a remainder.
static MPoly mp_divexact(const MPoly& f, const MPoly& g, u64 q) {
  int dg = mp_deg(g);
  if (dg < 0) fail_invalid("mp_divexact: division by zero polynomial");
  MPoly num = f;
  mp_normalize(num);
  if (num.empty()) return {};
  if (mp_deg(num) < dg) fail_inconsistent("mp_divexact: inexact division");
  MPoly quo(mp_deg(num) - dg + 1, 0);
  u64 inv = invmod_u64(g[dg], q);
  for (int k = (int)quo.size() - 1; k >= 0; --k) {
    u64 c = mulmod_u64(num[k + dg], inv, q);
    quo[k] = c;
    if (c)
      for (int j = 0; j <= dg; ++j) num[k + j] = submod_u64(num[k + j], mulmod_u64(c, g[j], q), q);
  }
  for (u64 c : num)
    if (c) fail_inconsistent("mp_divexact: inexact division");
  mp_normalize(quo);
  return quo;
}

MPoly mp_monic(MPoly f, u64 q) {
  mp_normalize(f);
  if (f.empty()) return f;
  u64 inv = invmod_u64(f.back(), q);
  for (auto& c : f) c = mulmod_u64(c, inv, q);
  return f;
}

MPoly mp_gcd(MPoly f, MPoly g, u64 q) {
  mp_normalize(f);
  mp_normalize(g);
  while (!g.empty()) {
    MPoly r = mp_rem(f, g, q);
    f = std::move(g);
    g = std::move(r);
  }
  return mp_monic(f, q);
}

MPoly mp_powmod(const MPoly& base, const mpz_class& e, const MPoly& mod, u64 q) {
  MPoly r{1};
  MPoly b = mp_rem(base, mod, q);
  mpz_class k = e;
  while (k > 0) {
    if (mpz_odd_p(k.get_mpz_t())) r = mp_rem(mp_mul(r, b, q), mod, q);
    b = mp_rem(mp_mul(b, b, q), mod, q);
    k >>= 1;
  }
  return r;
}

static MPoly mp_derivative(const MPoly& f, u64 q) {
  if (f.size() <= 1) return {};
  MPoly h(f.size() - 1);
  for (size_t i = 1; i < f.size(); ++i) h[i - 1] = mulmod_u64(f[i], i % q, q);
  mp_normalize(h);
  return h;
}

std::vector<std::pair<int, MPoly>> mp_ddf(const MPoly& f0, u64 q) {
  MPoly f = mp_monic(f0, q);
  std::vector<std::pair<int, MPoly>> out;
  MPoly h{0, 1};  // will hold x^(q^d) mod f
  int d = 0;
  while (mp_deg(f) > 0) {
    ++d;
    if (2 * d > mp_deg(f)) {
      out.push_back({mp_deg(f), f});
      break;
    }
    h = mp_powmod(h, mpz_class((unsigned long)q), f, q);
    MPoly diff = h;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = submod_u64(diff[1], 1, q);
    mp_normalize(diff);
    MPoly g = mp_gcd(f, diff, q);
    if (mp_deg(g) > 0) {
      out.push_back({d, g});
      f = mp_monic(mp_divexact(f, g, q), q);
      h = mp_rem(h, f, q);
    }
  }
  return out;
}

std::vector<MPoly> mp_edf(const MPoly& f0, int d, u64 q) {
  MPoly f = mp_monic(f0, q);
  if (mp_deg(f) <= 0) return {};
  if (mp_deg(f) == d) return {f};
  if (mp_deg(f) % d != 0) fail_invalid("mp_edf: degree is not a multiple of d");
  // Deterministic PRNG seeded from the input so runs are reproducible.
  u64 seed = 0x9e3779b97f4a7c15ull ^ (u64)mp_deg(f);
  for (u64 c : f) seed = seed * 0x100000001b3ull + c;
  std::vector<MPoly> out;
  std::vector<MPoly> stack{f};
  mpz_class e;
  mpz_pow_ui(e.get_mpz_t(), mpz_class((unsigned long)q).get_mpz_t(), d);
  e = (e - 1) / 2;
  while (!stack.empty()) {
    MPoly g = stack.back();
    stack.pop_back();
    if (mp_deg(g) == d) {
      out.push_back(g);
      continue;
    }
    MPoly split;
    for (int attempt = 0;; ++attempt) {
      if (attempt > 256) fail_inconsistent("mp_edf: splitting failed to converge");
      MPoly r(mp_deg(g), 0);
      for (auto& c : r) {
        seed = seed * 6364136223846793005ull + 1442695040888963407ull;
        c = (seed >> 8) % q;
      }
      mp_normalize(r);
      if (r.empty()) continue;
      MPoly t = mp_powmod(r, e, g, q);
      if (t.empty()) continue;
      t[0] = submod_u64(t[0], 1, q);
      mp_normalize(t);
      MPoly h = mp_gcd(g, t, q);
      if (mp_deg(h) > 0 && mp_deg(h) < mp_deg(g)) {
        split = h;
        break;
      }
    }
    stack.push_back(split);
    stack.push_back(mp_monic(mp_divexact(g, split, q), q));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<MPoly, int>> mp_factor(const MPoly& f0, u64 q) {
  MPoly f = mp_monic(f0, q);
  if (mp_deg(f) <= 0) return {};
  // q far exceeds deg f in all uses, so f / gcd(f, f') is the full radical.
  MPoly rad = mp_monic(mp_divexact(f, mp_gcd(f, mp_derivative(f, q), q), q), q);
  std::vector<std::pair<MPoly, int>> out;
  for (auto& [d, prod] : mp_ddf(rad, q)) {
    for (auto& irr : mp_edf(prod, d, q)) {
      int m = 0;
      MPoly work = f;
      while (mp_deg(work) >= mp_deg(irr) && mp_rem(work, irr, q).empty()) {
        work = mp_divexact(work, irr, q);
        ++m;
      }
      if (m == 0) fail_inconsistent("mp_factor: lost factor");
      out.push_back({irr, m});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace omf5
