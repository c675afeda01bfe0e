#include "omf5/forms.hpp"

#include <algorithm>
#include <sstream>

namespace omf5 {

IMat hessian_from_coeffs(const std::vector<i64>& a) {
  if (a.size() != 15) fail_invalid("expected 15 coefficients for a quinary form");
  IMat h(5, 5);
  int t = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = i; j < 5; ++j) {
      i64 c = a[(size_t)t++];
      if (i == j) {
        h(i, i) = 2 * c;
      } else {
        h(i, j) = c;
        h(j, i) = c;
      }
    }
  return h;
}

std::vector<i64> coeffs_from_hessian(const IMat& h) {
  std::vector<i64> a;
  for (int i = 0; i < 5; ++i)
    for (int j = i; j < 5; ++j) a.push_back(i == j ? h(i, i) / 2 : h(i, j));
  return a;
}

bool is_integral_hessian(const IMat& h) {
  if (h.rows() != 5 || h.cols() != 5) return false;
  for (int i = 0; i < 5; ++i) {
    if (h(i, i) % 2 != 0) return false;
    for (int j = 0; j < 5; ++j)
      if (h(i, j) != h(j, i)) return false;
  }
  return true;
}

bool is_positive_definite(const IMat& h) {
  for (int k = 1; k <= 5; ++k) {
    ZMat m(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) m(i, j) = h(i, j);
    if (det_bareiss(std::move(m)) <= 0) return false;
  }
  return true;
}

void require_form(const IMat& h) {
  if (!is_integral_hessian(h)) fail_invalid("matrix is not an integral quinary Hessian (symmetric, even diagonal)");
  if (!is_positive_definite(h)) fail_invalid("form is not positive definite");
}

mpz_class form_determinant(const IMat& h) { return det_bareiss(to_z(h)); }

i64 half_determinant(const IMat& h) {
  mpz_class d = form_determinant(h);
  if (d % 2 != 0) fail_inconsistent("determinant of an even-diagonal odd-rank lattice must be even");
  mpz_class n = d / 2;
  if (!n.fits_slong_p()) fail_invalid("determinant exceeds the supported range");
  return n.get_si();
}

int hilbert_symbol(const mpq_class& a, const mpq_class& b, i64 v) {
  if (a == 0 || b == 0) fail_invalid("hilbert symbol requires nonzero arguments");
  if (v == 0) return (a < 0 && b < 0) ? -1 : 1;
  if (v < 2 || !is_prime_u64((u64)v)) fail_invalid("hilbert symbol place must be 0 (real) or a prime");
  mpz_class p(v);
  auto split = [&](const mpq_class& x, long& alpha) {
    mpz_class nu, de;
    long vn = (long)mpz_remove(nu.get_mpz_t(), x.get_num().get_mpz_t(), p.get_mpz_t());
    long vd = (long)mpz_remove(de.get_mpz_t(), x.get_den().get_mpz_t(), p.get_mpz_t());
    alpha = vn - vd;
    return mpz_class(nu * de);  // same square class as the unit part of x
  };
  long alpha, beta;
  mpz_class u = split(a, alpha), w = split(b, beta);
  bool ao = (alpha % 2) != 0, bo = (beta % 2) != 0;
  if (v == 2) {
    auto eps = [](const mpz_class& x) {
      mpz_class m = x % 4;
      if (m < 0) m += 4;
      return m == 3 ? 1 : 0;
    };
    auto om = [](const mpz_class& x) {
      mpz_class m = x % 8;
      if (m < 0) m += 8;
      return (m == 1 || m == 7) ? 0 : 1;
    };
    int e = eps(u) * eps(w) + (ao ? om(w) : 0) + (bo ? om(u) : 0);
    return (e % 2) ? -1 : 1;
  }
  int eps_p = (int)(((v - 1) / 2) % 2);
  int sign = 1;
  if (ao && bo && eps_p) sign = -sign;
  if (bo) sign *= mpz_legendre(u.get_mpz_t(), p.get_mpz_t());
  if (ao) sign *= mpz_legendre(w.get_mpz_t(), p.get_mpz_t());
  return sign;
}

int hasse_witt(const IMat& h, i64 v) {
  require_form(h);
  // Diagonalize the Gram matrix H/2 by symmetric elimination; positive
  // definiteness keeps every pivot nonzero.
  QMat B(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      mpq_class t(h(i, j), 2);
      t.canonicalize();
      B(i, j) = t;
    }
  QVec d(5);
  for (int k = 0; k < 5; ++k) {
    if (B(k, k) == 0) fail_inconsistent("zero pivot while diagonalizing a definite form");
    for (int i = k + 1; i < 5; ++i) {
      mpq_class f = B(i, k) / B(k, k);
      if (f == 0) continue;
      for (int j = k; j < 5; ++j) B(i, j) -= f * B(k, j);
      for (int j = k; j < 5; ++j) B(j, i) -= f * B(j, k);
    }
    d[k] = B(k, k);
  }
  int hw = hilbert_symbol(-1, -1, v);
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) hw *= hilbert_symbol(d[i], d[j], v);
  return hw;
}

std::array<mpz_class, 5> discriminant_group(const IMat& h) {
  require_form(h);
  ZVec d = snf_divisors(to_z(h));
  std::array<mpz_class, 5> out;
  for (int i = 0; i < 5; ++i) out[i] = d[(size_t)i];
  return out;
}

bool is_special(const IMat& h) {
  auto d = discriminant_group(h);
  int nontrivial = 0;
  for (auto& x : d)
    if (x > 1) ++nontrivial;
  return nontrivial <= 1;
}

namespace {

long val_q(const mpq_class& x, const mpz_class& p) {
  if (x == 0) fail_inconsistent("valuation of zero");
  mpz_class t;
  long vn = (long)mpz_remove(t.get_mpz_t(), x.get_num().get_mpz_t(), p.get_mpz_t());
  long vd = (long)mpz_remove(t.get_mpz_t(), x.get_den().get_mpz_t(), p.get_mpz_t());
  return vn - vd;
}

// Diagonalize a symmetric rational matrix over Z_(p), p odd: returns the
// diagonal values.  Pivots are chosen at minimal valuation so all
// elimination coefficients are p-integral.
QVec jordan_diagonalize_odd(QMat B, const mpz_class& p) {
  int n = B.rows();
  QVec diag(n);
  for (int k = 0; k < n; ++k) {
    long best = 0;
    int bi = -1, bj = -1;
    for (int i = k; i < n; ++i)
      for (int j = i; j < n; ++j) {
        if (B(i, j) == 0) continue;
        long v = val_q(B(i, j), p);
        bool better = bi < 0 || v < best || (v == best && i == j && bi != bj);
        if (better) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    if (bi < 0) fail_invalid("form is degenerate");
    if (bi != bj) {
      // replace e_bi by e_bi +- e_bj so the diagonal attains the minimum
      for (int t = 0; t < 2; ++t) {
        int s = t == 0 ? 1 : -1;
        mpq_class cand = B(bi, bi) + 2 * s * B(bi, bj) + B(bj, bj);
        if (cand != 0 && val_q(cand, p) == best) {
          for (int j2 = 0; j2 < n; ++j2) B(bi, j2) += s * B(bj, j2);
          for (int i2 = 0; i2 < n; ++i2) B(i2, bi) += s * B(i2, bj);
          break;
        }
        if (t == 1) fail_inconsistent("jordan: minimal valuation not attainable on the diagonal");
      }
    }
    if (bi != k) {
      for (int j2 = 0; j2 < n; ++j2) std::swap(B(k, j2), B(bi, j2));
      for (int i2 = 0; i2 < n; ++i2) std::swap(B(i2, k), B(i2, bi));
    }
    for (int i = k + 1; i < n; ++i) {
      if (B(i, k) == 0) continue;
      mpq_class f = B(i, k) / B(k, k);
      for (int j2 = 0; j2 < n; ++j2) B(i, j2) -= f * B(k, j2);
      for (int i2 = 0; i2 < n; ++i2) B(i2, i) -= f * B(i2, k);
    }
    diag[k] = B(k, k);
  }
  return diag;
}

}  // namespace

int eichler_invariant(const IMat& h, i64 p) {
  require_form(h);
  if (p < 2 || !is_prime_u64((u64)p)) fail_invalid("eichler invariant: p must be prime");
  mpz_class det = form_determinant(h);
  mpz_class N = det / 2;
  if (p == 2) {
    if (mpz_odd_p(N.get_mpz_t())) return 1;
    fail_invalid("eichler invariant at p=2 with even N is not supported (odd discriminants only)");
  }
  mpz_class pz(p);
  mpz_class tmp;
  long vN = (long)mpz_remove(tmp.get_mpz_t(), N.get_mpz_t(), pz.get_mpz_t());
  if (vN == 0) return 1;
  QVec diag = jordan_diagonalize_odd(to_q(to_z(h)), pz);
  mpq_class unit_prod = 1;
  int units = 0;
  long nonunit_val = 0;
  for (auto& d : diag) {
    long v = val_q(d, pz);
    if (v == 0) {
      ++units;
      unit_prod *= d;
    } else {
      nonunit_val += v;
    }
  }
  if (units != 4) fail_invalid("form is not special at p (unimodular Jordan block has rank != 4)");
  if (nonunit_val != vN) fail_inconsistent("jordan valuations disagree with det");
  // d(A) = +1 iff det A is a square unit
  mpz_class u = unit_prod.get_num() * unit_prod.get_den();
  int s = mpz_legendre(u.get_mpz_t(), pz.get_mpz_t());
  if (s == 0) fail_inconsistent("unit part collapsed mod p");
  return s;
}

i64 radical_qvalue(const IMat& h, const IVec& v, i64 q) {
  i64 two_q = 2 * q;
  for (int i = 0; i < 5; ++i) {
    i64 s = 0;
    for (int j = 0; j < 5; ++j) s += h(i, j) * v[(size_t)j];
    if (s % two_q != 0) fail_invalid("vector is not in the radical mod 2q");
  }
  mpz_class qv = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) qv += mpz_class(h(i, j)) * v[(size_t)i] * v[(size_t)j];
  qv /= 2;
  if (qv % q != 0) fail_inconsistent("radical Q-value is not divisible by q");
  mpz_class t = (qv / q) % (4 * q);
  if (t < 0) t += 4 * q;
  return t.get_si();
}

IVec radical_generator(const IMat& h, i64 q) {
  require_form(h);
  if (q < 3 || q % 2 == 0 || !is_prime_u64((u64)q)) fail_invalid("radical generator: q must be an odd prime");
  i64 D = half_determinant(h);
  if (D % 2 == 0) fail_invalid("even discriminants are not supported");
  if (D % q != 0) fail_invalid("q does not divide the half-determinant; no radical at q");
  // kernel of H mod q (corank must be 1) and mod 2
  UMat Kq = nullspace_mod(reduce_mod(to_z(h), (u64)q), (u64)q);
  if (Kq.cols() != 1) fail_invalid("form is not special at q (radical has rank != 1)");
  UMat K2 = nullspace_mod(reduce_mod(to_z(h), 2), 2);
  if (K2.cols() != 1) fail_inconsistent("mod 2 radical has rank != 1");
  i64 two_q = 2 * q;
  IVec v(5);
  for (int i = 0; i < 5; ++i) {
    // CRT: v = Kq(i) mod q, v = K2(i) mod 2
    i64 a = (i64)Kq(i, 0) % q, b = (i64)K2(i, 0) % 2;
    i64 x = a;
    if ((x % 2 + 2) % 2 != b) x += q;  // q odd, so adding q flips parity
    v[(size_t)i] = ((x % two_q) + two_q) % two_q;
  }
  // Canonical representative: scan all unit multiples; minimize
  // (Q(v)/q mod 4q, lexicographic entries).  The first component makes
  // transporter multipliers between genus-mates equal +-1.
  IVec best;
  i64 best_t = -1;
  for (i64 s = 1; s < two_q; ++s) {
    if (gcd_i64(s, two_q) != 1) continue;
    IVec w(5);
    for (int i = 0; i < 5; ++i) w[(size_t)i] = (v[(size_t)i] * s) % two_q;
    i64 t = radical_qvalue(h, w, q);
    if (best_t < 0 || t < best_t || (t == best_t && w < best)) {
      best_t = t;
      best = w;
    }
  }
  return best;
}

void validate_genus_symbol(const GenusSym& g) {
  if (g.d_minus < 1 || g.d_plus < 1) fail_invalid("genus symbol parts must be positive");
  if (g.d_minus % 2 == 0 || g.d_plus % 2 == 0) fail_invalid("even discriminants are not supported");
  if (!is_squarefree_i64(g.d_minus)) fail_invalid("D- must be squarefree");
  if (gcd_i64(g.d_minus, g.d_plus) != 1) fail_invalid("D- and D+ must be coprime");
  if (prime_factors(g.d_minus).size() % 2 == 0)
    fail_nogenus("no genus: D- must have an odd number of prime factors");
}

bool matches_genus_symbol(const IMat& h, const GenusSym& g, std::string* why) {
  auto reject = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  mpz_class det = form_determinant(h);
  if (det != 2 * mpz_class(g.d_minus) * mpz_class(g.d_plus)) return reject("determinant mismatch");
  if (!is_special(h)) return reject("not special");
  if (hasse_witt(h, 0) != -1) return reject("HW at infinity != -1");
  for (i64 p : prime_factors(2 * g.disc())) {
    int want = (g.d_minus % p == 0) ? -1 : 1;
    if (hasse_witt(h, p) != want) return reject("HW mismatch at p=" + std::to_string(p));
  }
  for (i64 p : prime_factors(g.d_plus)) {
    if (eichler_invariant(h, p) != 1) return reject("Eichler invariant != +1 at p=" + std::to_string(p));
  }
  for (i64 p : prime_factors(g.d_minus)) {
    if (eichler_invariant(h, p) != -1) return reject("Eichler invariant != -1 at p=" + std::to_string(p));
  }
  return true;
}

IMat seed_search(i64 d_minus, i64 d_plus, i64 coeff_bound) {
  GenusSym g{d_minus, d_plus};
  validate_genus_symbol(g);
  if (coeff_bound < 1) fail_invalid("coefficient bound must be positive");
  i64 D = g.disc();
  mpz_class target = 2 * mpz_class(D);
  // Minkowski: a reduced form has prod(H_ii) <= 8 det(H) = 16 D and
  // |H_ij| <= min(H_ii, H_jj)/2, so the box below is exhaustive.
  std::vector<std::array<int, 2>> fill_order;
  for (int j = 1; j < 5; ++j)
    for (int i = 0; i < j; ++i) fill_order.push_back({i, j});

  IMat h(5, 5);
  IMat found(0, 0);
  bool done = false;

  // positive-definiteness + Fischer pruning after each completed column
  auto column_ok = [&](int j) {
    int k = j + 1;
    ZMat m(k, k);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) m(a, b) = h(a, b);
    mpz_class minor = det_bareiss(std::move(m));
    if (minor <= 0) return false;
    mpz_class cap = minor;
    for (int t = k; t < 5; ++t) cap *= h(t, t);
    return cap >= target;  // Fischer: det <= minor_k * prod of later diagonals
  };

  std::function<void(size_t)> dfs = [&](size_t pos) {
    if (done) return;
    if (pos == fill_order.size()) {
      if (form_determinant(h) != target) return;
      std::string why;
      if (matches_genus_symbol(h, g, &why)) {
        found = h;
        done = true;
      }
      return;
    }
    auto [i, j] = fill_order[pos];
    i64 r = std::min(std::min(h(i, i), h(j, j)) / 2, coeff_bound);
    for (i64 x = -r; x <= r && !done; ++x) {
      h(i, j) = x;
      h(j, i) = x;
      if (i == j - 1) {  // column j just completed
        if (!column_ok(j)) continue;
      }
      dfs(pos + 1);
    }
    h(i, j) = 0;
    h(j, i) = 0;
  };

  std::vector<i64> diag(5);
  std::function<void(int, i64, i64)> diag_loop = [&](int k, i64 lo, i64 prod) {
    if (done) return;
    if (k == 5) {
      if (mpz_class(prod) < target) return;
      for (int t = 0; t < 5; ++t) h(t, t) = diag[(size_t)t];
      for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b)
          if (a != b) h(a, b) = 0;
      dfs(0);
      return;
    }
    for (i64 d = lo; d <= 2 * coeff_bound && !done; d += 2) {
      // remaining diagonals are >= d, so the least achievable product is
      // prod * d^(5-k); it must stay <= 16 D (Minkowski)
      mpz_class least = prod;
      for (int t = k; t < 5; ++t) least *= d;
      if (least > 16 * mpz_class(D)) break;
      diag[(size_t)k] = d;
      diag_loop(k + 1, d, prod * d);
    }
  };
  diag_loop(0, 2, 1);
  if (!done) fail_invalid("no seed found within the coefficient bound");
  return found;
}

}  // namespace omf5
