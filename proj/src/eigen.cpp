// Spectral analysis of Hecke operators: exact characteristic polynomials,
// saturated block lattices, bounded factor extraction via Hensel lifting,
// and the mod-ell eigenvector comparisons behind the congruence proofs.
#include "omf5/eigen.hpp"

#include <algorithm>
#include <functional>

namespace omf5 {

namespace {

// ---- word-prime polynomial helpers beyond poly.hpp ------------------------

void mp_divrem(MPoly a, const MPoly& b, u64 q, MPoly& quo, MPoly& rem) {
  int db = mp_deg(b);
  if (db < 0) fail_invalid("mp_divrem: division by zero");
  u64 inv = invmod_u64(b[db], q);
  int da = mp_deg(a);
  quo.assign(da >= db ? da - db + 1 : 0, 0);
  for (int i = da; i >= db; --i) {
    if (a[i] == 0) continue;
    u64 c = mulmod_u64(a[i], inv, q);
    quo[i - db] = c;
    for (int j = 0; j <= db; ++j) a[i - db + j] = submod_u64(a[i - db + j], mulmod_u64(c, b[j], q), q);
  }
  mp_normalize(a);
  rem = a;
}

// s*a + t*b = 1 mod q; requires gcd(a, b) = 1.
void mp_xgcd_one(const MPoly& a, const MPoly& b, u64 q, MPoly& s, MPoly& t) {
  MPoly r0 = a, r1 = b, s0 = {1}, s1 = {}, t0 = {}, t1 = {1};
  while (mp_deg(r1) >= 0) {
    MPoly qq, rr;
    mp_divrem(r0, r1, q, qq, rr);
    r0 = r1;
    r1 = rr;
    auto step = [&](MPoly& x0, MPoly& x1) {
      MPoly nx = x0;
      MPoly qx = mp_mul(qq, x1, q);
      if (nx.size() < qx.size()) nx.resize(qx.size(), 0);
      for (size_t i = 0; i < qx.size(); ++i) nx[i] = submod_u64(nx[i], qx[i], q);
      mp_normalize(nx);
      x0 = x1;
      x1 = nx;
    };
    step(s0, s1);
    step(t0, t1);
  }
  if (mp_deg(r0) != 0) fail_inconsistent("mp_xgcd_one: inputs are not coprime");
  u64 inv = invmod_u64(r0[0], q);
  for (u64& c : s0) c = mulmod_u64(c, inv, q);
  for (u64& c : t0) c = mulmod_u64(c, inv, q);
  s = s0;
  t = t0;
}

// ---- polynomial arithmetic modulo a big integer ---------------------------

ZPoly zm_norm(ZPoly f, const mpz_class& m) {
  for (mpz_class& c : f) {
    c %= m;
    if (c < 0) c += m;
  }
  zp_normalize(f);
  return f;
}

ZPoly zm_mul(const ZPoly& a, const ZPoly& b, const mpz_class& m) { return zm_norm(zp_mul(a, b), m); }
ZPoly zm_add(const ZPoly& a, const ZPoly& b, const mpz_class& m) { return zm_norm(zp_add(a, b), m); }
ZPoly zm_sub(const ZPoly& a, const ZPoly& b, const mpz_class& m) { return zm_norm(zp_sub(a, b), m); }

// a = quo*b + rem mod m with b monic.
void zm_divrem(ZPoly a, const ZPoly& b, const mpz_class& m, ZPoly& quo, ZPoly& rem) {
  int db = zp_deg(b);
  if (db < 0 || b[db] != 1) fail_invalid("zm_divrem: divisor must be monic");
  a = zm_norm(std::move(a), m);
  int da = zp_deg(a);
  quo.assign(da >= db ? da - db + 1 : 0, 0);
  for (int i = da; i >= db; --i) {
    if (a[i] == 0) continue;
    mpz_class c = a[i];
    quo[i - db] = c;
    for (int j = 0; j <= db; ++j) {
      a[i - db + j] -= c * b[j];
      a[i - db + j] %= m;
      if (a[i - db + j] < 0) a[i - db + j] += m;
    }
  }
  zp_normalize(quo);
  zp_normalize(a);
  rem = a;
}

ZPoly mp_to_z(const MPoly& f) {
  ZPoly z(f.size());
  for (size_t i = 0; i < f.size(); ++i) z[i] = (unsigned long)f[i];
  zp_normalize(z);
  return z;
}

// One Hensel step: relations f = g*h, s*g + t*h = 1 valid mod m become valid
// mod mnew, where m | mnew | m^2; g, h stay monic of fixed degree.
void hensel_step(const ZPoly& f, ZPoly& g, ZPoly& h, ZPoly& s, ZPoly& t, const mpz_class& mnew) {
  int dg = zp_deg(g), dh = zp_deg(h);
  ZPoly e = zm_sub(zm_norm(f, mnew), zm_mul(g, h, mnew), mnew);
  ZPoly q1, r1;
  zm_divrem(zm_mul(s, e, mnew), h, mnew, q1, r1);
  g = zm_add(zm_add(g, zm_mul(t, e, mnew), mnew), zm_mul(q1, g, mnew), mnew);
  h = zm_add(h, r1, mnew);
  ZPoly b = zm_sub(zm_add(zm_mul(s, g, mnew), zm_mul(t, h, mnew), mnew), ZPoly{1}, mnew);
  ZPoly c1, d1;
  zm_divrem(zm_mul(s, b, mnew), h, mnew, c1, d1);
  s = zm_sub(s, d1, mnew);
  t = zm_sub(zm_sub(t, zm_mul(t, b, mnew), mnew), zm_mul(c1, g, mnew), mnew);
  if (zp_deg(g) != dg || g[dg] != 1 || zp_deg(h) != dh || h[dh] != 1)
    fail_inconsistent("hensel_step: lift lost monicity");
}

// Lift a coprime pair g0*h0 = f (mod q) to modulus mstar (a power of q).
void hensel_pair(const ZPoly& f, const MPoly& g0, const MPoly& h0, u64 q, const mpz_class& mstar,
                 ZPoly& g, ZPoly& h) {
  MPoly s0, t0;
  mp_xgcd_one(g0, h0, q, s0, t0);
  g = mp_to_z(g0);
  h = mp_to_z(h0);
  ZPoly s = mp_to_z(s0), t = mp_to_z(t0);
  mpz_class m = (unsigned long)q;
  while (m < mstar) {
    mpz_class mnew = m * m;
    if (mnew > mstar) mnew = mstar;
    hensel_step(f, g, h, s, t, mnew);
    m = mnew;
  }
  if (!zp_is_zero(zm_sub(zm_norm(f, mstar), zm_mul(g, h, mstar), mstar)))
    fail_inconsistent("hensel_pair: lifted factors do not multiply back");
}

// Lift every factor in fac (pairwise coprime, monic, product = f mod q) to
// modulus mstar.
std::vector<ZPoly> hensel_list(const ZPoly& f, const std::vector<MPoly>& fac, u64 q,
                               const mpz_class& mstar) {
  if (fac.size() == 1) return {zm_norm(f, mstar)};
  size_t half = fac.size() / 2;
  MPoly g0 = {1}, h0 = {1};
  for (size_t i = 0; i < half; ++i) g0 = mp_mul(g0, fac[i], q);
  for (size_t i = half; i < fac.size(); ++i) h0 = mp_mul(h0, fac[i], q);
  ZPoly g, h;
  hensel_pair(f, g0, h0, q, mstar, g, h);
  std::vector<MPoly> la(fac.begin(), fac.begin() + half), lb(fac.begin() + half, fac.end());
  std::vector<ZPoly> out = hensel_list(g, la, q, mstar);
  std::vector<ZPoly> right = hensel_list(h, lb, q, mstar);
  out.insert(out.end(), right.begin(), right.end());
  return out;
}

// Ceiling of the 2-norm of f.
mpz_class zp_norm2_ceil(const ZPoly& f) {
  mpz_class s = 0;
  for (const mpz_class& c : f) s += c * c;
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), s.get_mpz_t());
  if (r * r < s) r += 1;
  return r;
}

// Monic gcd over Q of a monic f and an arbitrary g, by modular gcds and CRT
// (a divisor of a monic integer polynomial is monic integral).  Returns {1}
// fast when a single prime certifies coprimality.
ZPoly monic_gcd(const ZPoly& f, const ZPoly& g) {
  if (zp_is_zero(g)) return f;
  int best = -1;
  std::vector<mpz_class> resid;
  mpz_class modulus = 1;
  for (int pi = 0; pi < 60; ++pi) {
    u64 q = nth_solver_prime(pi);
    MPoly fq = mp_reduce(f, q);
    if (mp_deg(fq) != zp_deg(f)) continue;
    MPoly d = mp_gcd(fq, mp_reduce(g, q), q);
    int dd = mp_deg(d);
    if (dd == 0) return {1};
    if (best < 0 || dd < best) {
      best = dd;
      resid.assign(d.begin(), d.end());
      modulus = (unsigned long)q;
    } else if (dd == best) {
      mpz_class qz((unsigned long)q);
      for (int i = 0; i <= dd; ++i)
        resid[i] = crt_pair(resid[i], modulus, mpz_class((unsigned long)d[i]), qz);
      modulus *= qz;
    }
    if (best >= 0) {
      mpz_class bound = zp_norm2_ceil(f);
      mpz_class two_pow;
      mpz_ui_pow_ui(two_pow.get_mpz_t(), 2, (unsigned long)best + 1);
      bound = 2 * two_pow * bound + 1;
      if (modulus > bound) {
        ZPoly cand(best + 1);
        for (int i = 0; i <= best; ++i) cand[i] = centered_mod(resid[i], modulus);
        ZPoly q1, q2;
        if (cand[best] == 1 && zp_divide_exact(f, cand, q1) && zp_divide_exact(g, cand, q2))
          return cand;
        // unlucky degree: every prime seen so far overshot; start over
        best = -1;
      }
    }
  }
  fail_inconsistent("monic_gcd: no stable modular gcd found");
}

// denom^deg(g) * g(M / denom), by Horner.
ZMat poly_at(const ZMat& M, const mpz_class& denom, const ZPoly& g) {
  int n = M.rows();
  int d = zp_deg(g);
  if (d < 0) return ZMat(n, n);
  std::vector<mpz_class> dp(d + 1);
  dp[0] = 1;
  for (int i = 1; i <= d; ++i) dp[i] = dp[i - 1] * denom;
  ZMat R(n, n);
  for (int i = 0; i < n; ++i) R(i, i) = g[d];
  for (int k = d - 1; k >= 0; --k) {
    R = R * M;
    const mpz_class c = g[k] * dp[d - k];
    for (int i = 0; i < n; ++i) R(i, i) += c;
  }
  return R;
}

// Spot-check f((M/denom)) * v = 0 mod q for column v of B, by vector Horner.
bool poly_kills_mod(const ZMat& M, const mpz_class& denom, const ZPoly& f, const ZMat& B, int col,
                    u64 q) {
  int n = M.rows();
  int d = zp_deg(f);
  UMat Mq = reduce_mod(M, q);
  mpz_class dq = denom % (long)q;
  if (dq < 0) dq += (long)q;
  if (dq == 0) return true;  // prime unusable, caller picks another
  u64 dinv = invmod_u64(dq.get_ui(), q);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Mq(i, j) = mulmod_u64(Mq(i, j), dinv, q);
  std::vector<u64> v(n), w(n);
  mpz_class t;
  for (int i = 0; i < n; ++i) {
    t = B(i, col) % (long)q;
    if (t < 0) t += (long)q;
    v[i] = t.get_ui();
  }
  auto cmod = [&](const mpz_class& c) {
    mpz_class r = c % (long)q;
    if (r < 0) r += (long)q;
    return r.get_ui();
  };
  for (int i = 0; i < n; ++i) w[i] = mulmod_u64(cmod(f[d]), v[i], q);
  for (int k = d - 1; k >= 0; --k) {
    std::vector<u64> mw(n, 0);
    for (int i = 0; i < n; ++i) {
      u64 acc = 0;
      for (int j = 0; j < n; ++j) acc = addmod_u64(acc, mulmod_u64(Mq(i, j), w[j], q), q);
      mw[i] = acc;
    }
    u64 ck = cmod(f[k]);
    for (int i = 0; i < n; ++i) w[i] = addmod_u64(mw[i], mulmod_u64(ck, v[i], q), q);
  }
  for (int i = 0; i < n; ++i)
    if (w[i] != 0) return false;
  return true;
}

void require_monic(const ZPoly& f, const char* who) {
  int d = zp_deg(f);
  if (d < 0 || f[d] != 1) fail_invalid(std::string(who) + ": polynomial must be monic");
}

u64 residue_u64(const mpz_class& c, u64 q) {
  mpz_class r = c % (long)q;
  if (r < 0) r += (long)q;
  return r.get_ui();
}

}  // namespace

CharPoly char_poly(const ZMat& M, const mpz_class& denom, std::string provenance) {
  if (M.rows() != M.cols()) fail_invalid("char_poly: matrix must be square");
  return {charpoly(M, denom, eig_row_bound(M, denom)), std::move(provenance)};
}

CharPoly op_charpoly(const HeckeOperator& T) {
  std::string prov = T.kind == 1 ? "T(" + std::to_string(T.p) + ")"
                                 : "T1(" + std::to_string(T.p * T.p) + ")";
  return char_poly(T.mat, T.denom, std::move(prov));
}

bool verify_factor_product(const ZPoly& f, const std::vector<ZPoly>& factors) {
  ZPoly prod = {1};
  for (const ZPoly& g : factors) prod = zp_mul(prod, g);
  ZPoly lhs = f;
  zp_normalize(lhs);
  return lhs == prod;
}

std::vector<std::pair<mpz_class, int>> rational_roots(const ZPoly& f0) {
  ZPoly f = f0;
  zp_normalize(f);
  if (zp_deg(f) <= 0) return {};
  require_monic(f, "rational_roots");
  // squarefree part: roots keep multiplicity via repeated division below
  ZPoly g = monic_gcd(f, zp_derivative(f));
  ZPoly s;
  if (zp_deg(g) == 0) {
    s = f;
  } else if (!zp_divide_exact(f, g, s)) {
    fail_inconsistent("rational_roots: gcd does not divide");
  }
  // locate roots modulo a solver prime keeping the squarefree reduction
  int pi = 0;
  u64 q = 0;
  MPoly sq;
  for (;; ++pi) {
    if (pi >= 50) fail_inconsistent("rational_roots: no usable prime");
    q = nth_solver_prime(pi);
    sq = mp_reduce(s, q);
    if (mp_deg(sq) != zp_deg(s)) continue;
    MPoly ds = sq;
    for (size_t i = 0; i + 1 < ds.size(); ++i) ds[i] = mulmod_u64(ds[i + 1], (i + 1) % q, q);
    ds.pop_back();
    mp_normalize(ds);
    if (mp_deg(mp_gcd(sq, ds, q)) == 0) break;
  }
  MPoly xq = mp_powmod({0, 1}, mpz_class((unsigned long)q), sq, q);
  // x^q - x
  if (xq.size() < 2) xq.resize(2, 0);
  xq[1] = submod_u64(xq[1], 1, q);
  mp_normalize(xq);
  MPoly lin = mp_gcd(sq, xq, q);
  std::vector<std::pair<mpz_class, int>> out;
  if (mp_deg(lin) <= 0) return out;
  std::vector<u64> roots;
  for (const MPoly& l : mp_edf(lin, 1, q)) roots.push_back(l[0] == 0 ? 0 : q - l[0]);
  // Newton-lift each residue past the coefficient bound, then verify exactly
  mpz_class bc = 0;
  for (const mpz_class& c : s)
    if (abs(c) > bc) bc = abs(c);
  bc = 2 * (bc + 1) + 1;
  ZPoly ds = zp_derivative(s);
  for (u64 r0 : roots) {
    mpz_class m((unsigned long)q), r((unsigned long)r0);
    while (m < bc) {
      mpz_class mnew = m * m;
      mpz_class sv = zp_eval(s, r) % mnew;
      mpz_class dv = zp_eval(ds, r) % mnew;
      mpz_class dinv;
      if (mpz_invert(dinv.get_mpz_t(), dv.get_mpz_t(), mnew.get_mpz_t()) == 0)
        fail_inconsistent("rational_roots: Newton derivative not invertible");
      r = (r - sv * dinv) % mnew;
      if (r < 0) r += mnew;
      m = mnew;
    }
    mpz_class cand = centered_mod(r, m);
    if (zp_eval(f, cand) != 0) continue;
    int mult = 0;
    ZPoly lin2 = {-cand, 1}, tmp = f, quo;
    while (zp_divide_exact(tmp, lin2, quo)) {
      tmp = quo;
      ++mult;
    }
    out.emplace_back(cand, mult);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

ZMat block_split(const ZMat& M, const mpz_class& denom, const ZPoly& f0) {
  if (M.rows() != M.cols()) fail_invalid("block_split: matrix must be square");
  ZPoly f = f0;
  zp_normalize(f);
  if (zp_deg(f) < 1) fail_invalid("block_split: factor must be nonconstant");
  require_monic(f, "block_split");
  ZPoly fcp = charpoly(M, denom, eig_row_bound(M, denom));
  ZPoly cof;
  if (!zp_divide_exact(fcp, f, cof))
    fail_invalid("block_split: polynomial does not divide the characteristic polynomial");
  bool coprime = zp_deg(monic_gcd(f, cof)) == 0;
  ZMat basis;
  if (coprime && zp_deg(cof) > 0 && zp_deg(cof) < zp_deg(f)) {
    // ker f(M) = im cof(M) when fcp = f*cof with coprime halves
    basis = saturate_columns(poly_at(M, denom, cof));
  } else {
    basis = nullspace_saturated(poly_at(M, denom, f));
  }
  if (coprime) check(basis.cols() == zp_deg(f), "block_split: rank does not match factor degree");
  int spot = std::min(basis.cols(), 4);
  for (int t = 0, done = 0; done < 2 && t < 10; ++t) {
    u64 q = nth_solver_prime(t);
    if (denom % (long)q == 0) continue;
    for (int c = 0; c < spot; ++c)
      check(poly_kills_mod(M, denom, f, basis, c, q), "block_split: basis escapes the kernel");
    ++done;
  }
  return basis;
}

UMat mod_ell_kernel(const ZMat& M, const mpz_class& denom, const mpz_class& c, u64 ell) {
  if (M.rows() != M.cols()) fail_invalid("mod_ell_kernel: matrix must be square");
  if (!is_prime_u64(ell)) fail_invalid("mod_ell_kernel: modulus must be prime");
  if (denom % (long)ell == 0) fail_invalid("mod_ell_kernel: denominator vanishes mod ell");
  ZMat A = M;
  mpz_class shift = c * denom;
  for (int i = 0; i < A.rows(); ++i) A(i, i) -= shift;
  return nullspace_mod(reduce_mod(A, ell), ell);
}

ZMat restrict_action(const ZMat& M, const mpz_class& denom, const ZMat& B) {
  int n = M.rows(), k = B.cols();
  if (M.cols() != n || B.rows() != n) fail_invalid("restrict_action: shape mismatch");
  if (k == 0) return ZMat(0, 0);
  ZMat MB = M * B;
  for (int attempt = 0; attempt < 8; ++attempt) {
    u64 q = nth_solver_prime(attempt);
    UMat Bt = reduce_mod(B.transpose(), q);
    std::vector<int> rows = rref_mod(Bt, q);
    if ((int)rows.size() != k) continue;
    QMat Bs(k, k), Ms(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        Bs(i, j) = mpq_class(B(rows[i], j));
        Ms(i, j) = mpq_class(MB(rows[i], j));
      }
    QMat R = solve_q(Bs, Ms);
    ZMat Rz = to_z_exact(R);
    if (B * Rz == MB) return Rz;
  }
  fail_inconsistent("restrict_action: span is not stable or basis is not saturated");
}

ZVec block_eigenvector_mod(const ZMat& M, const mpz_class& denom, const ZMat& B,
                           const mpz_class& c, u64 ell) {
  ZMat R = restrict_action(M, denom, B);
  UMat K = mod_ell_kernel(R, denom, c, ell);
  if (K.cols() != 1) fail_invalid("block_eigenvector_mod: eigenvalue is not simple on the block");
  ZVec coords(K.rows());
  for (int i = 0; i < K.rows(); ++i) coords[i] = (unsigned long)K(i, 0);
  ZVec v = B * coords;
  int pivot = -1;
  for (size_t i = 0; i < v.size(); ++i) {
    v[i] %= (long)ell;
    if (v[i] < 0) v[i] += (long)ell;
    if (pivot < 0 && v[i] != 0) pivot = (int)i;
  }
  if (pivot < 0) fail_inconsistent("block_eigenvector_mod: vector vanished mod ell");
  u64 inv = invmod_u64(v[pivot].get_ui(), ell);
  for (mpz_class& x : v) x = (unsigned long)mulmod_u64(x.get_ui(), inv, ell);
  return v;
}

ZVec eigenvector_mod_ellk(const ZMat& M, const mpz_class& denom, const mpz_class& lambda,
                          u64 ell, int k) {
  if (M.rows() != M.cols()) fail_invalid("eigenvector_mod_ellk: matrix must be square");
  if (!is_prime_u64(ell)) fail_invalid("eigenvector_mod_ellk: modulus must be prime");
  if (denom % (long)ell == 0) fail_invalid("eigenvector_mod_ellk: denominator vanishes mod ell");
  if (k < 1) fail_invalid("eigenvector_mod_ellk: precision must be positive");
  int n = M.rows();
  mpz_class m;
  mpz_ui_pow_ui(m.get_mpz_t(), ell, (unsigned long)k);
  ZMat A = M;
  mpz_class shift = lambda * denom;
  for (int i = 0; i < n; ++i) A(i, i) -= shift;
  ZMat L = lattice_kernel_mod(A, m);
  // reductions mod ell of the kernel lattice: must be a single line
  UMat V(n, L.cols());
  int nonzero = 0;
  for (int j = 0; j < L.cols(); ++j) {
    bool nz = false;
    for (int i = 0; i < n; ++i) {
      V(i, j) = residue_u64(L(i, j), ell);
      nz = nz || V(i, j) != 0;
    }
    nonzero += nz ? 1 : 0;
  }
  if (nonzero == 0 || rank_mod(V, ell) != 1)
    fail_inconsistent("eigenvector_mod_ellk: approximate eigenvalue does not isolate a line");
  for (int j = 0; j < L.cols(); ++j) {
    int pivot = -1;
    for (int i = 0; i < n; ++i)
      if (V(i, j) != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    u64 inv = invmod_u64(V(pivot, j), ell);
    ZVec v(n);
    for (int i = 0; i < n; ++i) v[i] = (unsigned long)mulmod_u64(V(i, j), inv, ell);
    return v;
  }
  fail_inconsistent("eigenvector_mod_ellk: unreachable");
}

std::vector<std::vector<long>> padic_root_digits(const ZPoly& f, u64 ell, int k) {
  if (ell < 2) fail_invalid("padic_root_digits: base must be at least 2");
  if (k < 1) fail_invalid("padic_root_digits: precision must be positive");
  if (zp_deg(f) < 0) fail_invalid("padic_root_digits: zero polynomial");
  auto eval_mod = [&](const mpz_class& x, const mpz_class& m) {
    mpz_class acc = 0;
    for (int i = zp_deg(f); i >= 0; --i) acc = (acc * x + f[i]) % m;
    if (acc < 0) acc += m;
    return acc;
  };
  std::vector<mpz_class> cur;
  mpz_class m = 1;
  for (int j = 1; j <= k; ++j) {
    mpz_class mprev = m;
    m *= (long)ell;
    std::vector<mpz_class> next;
    if (j == 1) {
      for (u64 r = 0; r < ell; ++r)
        if (eval_mod(mpz_class((unsigned long)r), m) == 0) next.emplace_back((unsigned long)r);
    } else {
      for (const mpz_class& c : cur)
        for (u64 t = 0; t < ell; ++t) {
          mpz_class r = c + mpz_class((unsigned long)t) * mprev;
          if (eval_mod(r, m) == 0) next.push_back(r);
        }
    }
    cur = std::move(next);
  }
  std::sort(cur.begin(), cur.end());
  std::vector<std::vector<long>> out;
  for (mpz_class r : cur) {
    std::vector<long> digits(k);
    for (int i = 0; i < k; ++i) {
      mpz_class d = r % (long)ell;
      digits[i] = d.get_si();
      r /= (long)ell;
    }
    out.push_back(std::move(digits));
  }
  return out;
}

CongruenceReport congruence_report(const std::vector<ZVec>& vectors, u64 ell,
                                   const std::vector<const HeckeOperator*>& ops) {
  if (vectors.empty()) fail_invalid("congruence_report: no vectors");
  if (!is_prime_u64(ell)) fail_invalid("congruence_report: modulus must be prime");
  int n = (int)vectors[0].size();
  int m = (int)vectors.size();
  UMat V(n, m);
  for (int j = 0; j < m; ++j) {
    if ((int)vectors[j].size() != n) fail_invalid("congruence_report: vector length mismatch");
    mpz_class content = 0;
    for (const mpz_class& x : vectors[j]) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), x.get_mpz_t());
    if (content == 0) fail_invalid("congruence_report: zero vector");
    for (int i = 0; i < n; ++i) V(i, j) = residue_u64(vectors[j][i] / content, ell);
  }
  CongruenceReport rep;
  rep.ell = ell;
  rep.vectors = V;
  rep.kernel_dim = rank_mod(V, ell);
  // eigenvalue tables: mu per (operator, vector), -1 if not an eigenvector
  bool all_eigen = true;
  for (const HeckeOperator* op : ops) {
    if (op->mat.rows() != n) fail_invalid("congruence_report: operator size mismatch");
    if (op->denom % (long)ell == 0)
      fail_invalid("congruence_report: operator denominator vanishes mod ell");
    UMat A = reduce_mod(op->mat, ell);
    u64 dinv = invmod_u64(residue_u64(op->denom, ell), ell);
    std::vector<i64> row(m, -1);
    for (int j = 0; j < m; ++j) {
      std::vector<u64> w(n, 0);
      for (int i = 0; i < n; ++i) {
        u64 acc = 0;
        for (int t = 0; t < n; ++t) acc = addmod_u64(acc, mulmod_u64(A(i, t), V(t, j), ell), ell);
        w[i] = mulmod_u64(acc, dinv, ell);
      }
      int pivot = -1;
      for (int i = 0; i < n; ++i)
        if (V(i, j) != 0) {
          pivot = i;
          break;
        }
      u64 mu = mulmod_u64(w[pivot], invmod_u64(V(pivot, j), ell), ell);
      bool eigen = true;
      for (int i = 0; i < n; ++i) eigen = eigen && w[i] == mulmod_u64(mu, V(i, j), ell);
      if (eigen)
        row[j] = (i64)mu;
      else
        all_eigen = false;
    }
    rep.eigenvalues.push_back(std::move(row));
  }
  if (rep.kernel_dim == 1)
    rep.verdict = "collinear";
  else if (rep.kernel_dim < m && all_eigen)
    rep.verdict = "common-eigenspace-forced";
  else
    rep.verdict = "independent";
  return rep;
}

namespace {

// Bounded Zassenhaus-style extraction of one proper factor of degree <= cap:
// factor mod a solver prime, Hensel-lift the small-degree factors past the
// Mignotte bound, and certify subset products by exact trial division.
// proven_irred is set when some prime leaves h irreducible.
bool try_extract(const ZPoly& h, int cap, ZPoly& out, bool& proven_irred) {
  int n = zp_deg(h);
  if (n <= 1) return false;
  ZPoly g0 = monic_gcd(h, zp_derivative(h));
  if (zp_deg(g0) > 0) {
    out = g0;
    return true;
  }
  int dcap = std::min(cap, n - 1);
  const int kPrimes = 24;
  const int kMaxCandidates = 4096;
  for (int pi = 0; pi < kPrimes; ++pi) {
    u64 q = nth_solver_prime(pi);
    MPoly hq = mp_reduce(h, q);
    if (mp_deg(hq) != n) continue;
    MPoly dh = hq;
    for (size_t i = 0; i + 1 < dh.size(); ++i) dh[i] = mulmod_u64(dh[i + 1], (i + 1) % q, q);
    dh.pop_back();
    mp_normalize(dh);
    if (mp_deg(mp_gcd(hq, dh, q)) != 0) continue;
    std::vector<MPoly> fac;
    for (auto& [p, e] : mp_factor(hq, q)) {
      check(e == 1, "try_extract: squarefree reduction has repeated factors");
      fac.push_back(p);
    }
    if (fac.size() == 1) {
      proven_irred = true;  // irreducible mod q and monic, hence irreducible over Z
      return false;
    }
    std::sort(fac.begin(), fac.end(), [](const MPoly& a, const MPoly& b) {
      if (a.size() != b.size()) return a.size() < b.size();
      return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    });
    // only factors of degree <= dcap can enter a candidate subset
    std::vector<MPoly> small, large;
    for (const MPoly& p : fac) (mp_deg(p) <= dcap ? small : large).push_back(p);
    if (small.empty()) continue;
    // enumerate index subsets by exact degree, smallest degree first
    std::vector<std::vector<int>> subsets;
    std::vector<int> degs(small.size());
    for (size_t i = 0; i < small.size(); ++i) degs[i] = mp_deg(small[i]);
    bool truncated = false;
    for (int d = 1; d <= dcap && !truncated; ++d) {
      std::vector<int> pick;
      std::function<void(int, int)> dfs = [&](int start, int rem) {
        if (truncated) return;
        if (rem == 0) {
          if ((int)pick.size() < (int)fac.size())  // never the whole factorization
            subsets.push_back(pick);
          if ((int)subsets.size() >= kMaxCandidates) truncated = true;
          return;
        }
        for (int i = start; i < (int)small.size(); ++i) {
          if (degs[i] > rem) break;
          pick.push_back(i);
          dfs(i + 1, rem - degs[i]);
          pick.pop_back();
          if (truncated) return;
        }
      };
      dfs(0, d);
    }
    if (subsets.empty()) continue;
    // Mignotte bound for a monic factor of degree <= dcap
    mpz_class bound;
    mpz_ui_pow_ui(bound.get_mpz_t(), 2, (unsigned long)dcap + 1);
    bound = 2 * bound * zp_norm2_ceil(h) + 1;
    mpz_class mstar = (unsigned long)q;
    while (mstar < bound) mstar *= (long)q;
    // lift only what candidates need: the small block against the rest
    std::vector<ZPoly> lifted;
    if (large.empty()) {
      lifted = hensel_list(zm_norm(h, mstar), small, q, mstar);
    } else {
      MPoly gs = {1}, gl = {1};
      for (const MPoly& p : small) gs = mp_mul(gs, p, q);
      for (const MPoly& p : large) gl = mp_mul(gl, p, q);
      ZPoly G, H;
      hensel_pair(zm_norm(h, mstar), gs, gl, q, mstar, G, H);
      lifted = hensel_list(G, small, q, mstar);
    }
    for (const std::vector<int>& sub : subsets) {
      ZPoly cand = {1};
      for (int i : sub) cand = zm_mul(cand, lifted[i], mstar);
      for (mpz_class& c : cand) c = centered_mod(c, mstar);
      zp_normalize(cand);
      int dc = zp_deg(cand);
      if (dc <= 0 || cand[dc] != 1) continue;
      if (cand[0] != 0 && h[0] != 0 && !mpz_divisible_p(h[0].get_mpz_t(), cand[0].get_mpz_t()))
        continue;
      ZPoly quo;
      if (zp_divide_exact(h, cand, quo)) {
        out = cand;
        return true;
      }
    }
  }
  return false;
}

}  // namespace

std::vector<ZPoly> split_blocks(const ZPoly& f0, int cap) {
  ZPoly f = f0;
  zp_normalize(f);
  if (zp_deg(f) < 1) fail_invalid("split_blocks: polynomial must be nonconstant");
  require_monic(f, "split_blocks");
  std::vector<ZPoly> done;
  std::vector<ZPoly> pending = {f};
  while (!pending.empty()) {
    ZPoly h = std::move(pending.back());
    pending.pop_back();
    for (auto& [r, mult] : rational_roots(h)) {
      ZPoly lin = {-r, 1}, quo;
      for (int e = 0; e < mult; ++e) {
        done.push_back(lin);
        check(zp_divide_exact(h, lin, quo), "split_blocks: root division failed");
        h = quo;
      }
    }
    if (zp_deg(h) < 1) continue;
    ZPoly g;
    bool irred = false;
    if (try_extract(h, cap, g, irred)) {
      ZPoly quo;
      check(zp_divide_exact(h, g, quo), "split_blocks: extracted factor does not divide");
      pending.push_back(std::move(g));
      if (zp_deg(quo) > 0) pending.push_back(std::move(quo));
    } else {
      done.push_back(std::move(h));
    }
  }
  std::sort(done.begin(), done.end(), [](const ZPoly& a, const ZPoly& b) {
    if (zp_deg(a) != zp_deg(b)) return zp_deg(a) < zp_deg(b);
    for (int i = zp_deg(a); i >= 0; --i)
      if (a[i] != b[i]) return a[i] < b[i];
    return false;
  });
  check(verify_factor_product(f, done), "split_blocks: factors do not multiply back");
  return done;
}

bool certify_irreducible(const ZPoly& f0, int attempts) {
  ZPoly f = f0;
  zp_normalize(f);
  int n = zp_deg(f);
  if (n < 1) fail_invalid("certify_irreducible: polynomial must be nonconstant");
  require_monic(f, "certify_irreducible");
  if (n == 1) return true;
  // degrees 1..n-1 still conceivable for a proper factor
  std::vector<bool> possible(n, true);
  int used = 0;
  for (int pi = 0; used < attempts && pi < attempts * 4; ++pi) {
    u64 q = nth_solver_prime(pi);
    MPoly fq = mp_reduce(f, q);
    if (mp_deg(fq) != n) continue;
    MPoly dh = fq;
    for (size_t i = 0; i + 1 < dh.size(); ++i) dh[i] = mulmod_u64(dh[i + 1], (i + 1) % q, q);
    dh.pop_back();
    mp_normalize(dh);
    if (mp_deg(mp_gcd(fq, dh, q)) != 0) continue;
    ++used;
    std::vector<int> degs;
    for (auto& [d, prod] : mp_ddf(fq, q)) {
      int copies = mp_deg(prod) / d;
      for (int t = 0; t < copies; ++t) degs.push_back(d);
    }
    // subset sums achievable from this prime's irreducible degrees
    std::vector<bool> reach(n, false);
    reach[0] = true;
    for (int d : degs)
      for (int s = n - 1; s >= d; --s)
        if (reach[s - d]) reach[s] = true;
    for (int s = 1; s < n; ++s) possible[s] = possible[s] && reach[s];
    bool any = false;
    for (int s = 1; s < n; ++s) any = any || possible[s];
    if (!any) return true;
  }
  return false;
}

}  // namespace omf5
