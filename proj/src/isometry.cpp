#include "omf5/isometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "omf5/forms.hpp"
#include "omf5/linalg.hpp"

namespace omf5 {

i64 det5(const IMat& m) {
  mpz_class d = det_mat(m);
  if (!d.fits_slong_p()) fail_inconsistent("det5: overflow");
  return d.get_si();
}

namespace {

// round to nearest integer, ties toward +infinity
mpz_class round_q(const mpq_class& x) {
  mpz_class num = x.get_num(), den = x.get_den();  // den > 0
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), mpz_class(2 * num + den).get_mpz_t(), mpz_class(2 * den).get_mpz_t());
  return r;
}

struct Gso {
  std::array<std::array<mpq_class, 5>, 5> mu;
  std::array<mpq_class, 5> B;
};

void compute_gso(const ZMat& G, Gso& s) {
  int n = G.rows();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      mpq_class t = mpq_class(G(i, j));
      for (int k = 0; k < j; ++k) t -= s.mu[(size_t)i][(size_t)k] * s.mu[(size_t)j][(size_t)k] * s.B[(size_t)k];
      s.mu[(size_t)i][(size_t)j] = t / s.B[(size_t)j];
    }
    mpq_class t = mpq_class(G(i, i));
    for (int k = 0; k < i; ++k) t -= s.mu[(size_t)i][(size_t)k] * s.mu[(size_t)i][(size_t)k] * s.B[(size_t)k];
    if (t <= 0) fail_invalid("lll: form is not positive definite");
    s.B[(size_t)i] = t;
  }
}

}  // namespace

IMat lll_gram(const IMat& h, IMat* transform) {
  int n = h.rows();
  if (n != 5 || h.cols() != 5) fail_invalid("lll: expected a 5x5 Gram matrix");
  ZMat G = to_z(h);
  IMat U = IMat::identity(n);
  auto col_sub = [&](int i, int j, const mpz_class& r) {
    // basis op b_i -= r b_j
    for (int k = 0; k < n; ++k) {
      mpz_class u = mpz_class(U(k, i)) - r * U(k, j);
      if (!u.fits_slong_p()) fail_inconsistent("lll: transform overflow");
      U(k, i) = u.get_si();
    }
    for (int k = 0; k < n; ++k) G(i, k) -= r * G(j, k);
    for (int k = 0; k < n; ++k) G(k, i) -= r * G(k, j);
  };
  auto col_swap = [&](int i, int j) {
    for (int k = 0; k < n; ++k) std::swap(U(k, i), U(k, j));
    for (int k = 0; k < n; ++k) std::swap(G(i, k), G(j, k));
    for (int k = 0; k < n; ++k) std::swap(G(k, i), G(k, j));
  };
  Gso s;
  compute_gso(G, s);
  const mpq_class delta(3, 4);
  int k = 1;
  while (k < n) {
    for (int j = k - 1; j >= 0; --j) {
      mpz_class r = round_q(s.mu[(size_t)k][(size_t)j]);
      if (r != 0) {
        col_sub(k, j, r);
        compute_gso(G, s);
      }
    }
    mpq_class lhs = s.B[(size_t)k];
    mpq_class rhs = (delta - s.mu[(size_t)k][(size_t)(k - 1)] * s.mu[(size_t)k][(size_t)(k - 1)]) * s.B[(size_t)(k - 1)];
    if (lhs >= rhs) {
      ++k;
    } else {
      col_swap(k, k - 1);
      compute_gso(G, s);
      k = std::max(k - 1, 1);
    }
  }
  if (transform) *transform = U;
  return to_i(G);
}

IMat reduced_form(const IMat& h, IMat* transform) {
  IMat u0;
  IMat g = lll_gram(h, &u0);
  std::array<int, 5> perm{0, 1, 2, 3, 4};
  std::array<int, 5> best_perm = perm;
  int best_mask = 0;
  IMat best = g;
  auto build = [&](const std::array<int, 5>& p, int mask, IMat& out) {
    std::array<i64, 5> sg;
    sg[0] = 1;
    for (int i = 1; i < 5; ++i) sg[(size_t)i] = (mask >> (i - 1)) & 1 ? -1 : 1;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) out(i, j) = sg[(size_t)i] * sg[(size_t)j] * g(p[(size_t)i], p[(size_t)j]);
  };
  IMat cand(5, 5);
  do {
    for (int mask = 0; mask < 16; ++mask) {
      build(perm, mask, cand);
      bool less = false, diff = false;
      for (int i = 0; i < 5 && !diff; ++i)
        for (int j = 0; j < 5 && !diff; ++j)
          if (cand(i, j) != best(i, j)) {
            less = cand(i, j) < best(i, j);
            diff = true;
          }
      if (diff && less) {
        best = cand;
        best_perm = perm;
        best_mask = mask;
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (transform) {
    IMat P(5, 5);
    std::array<i64, 5> sg;
    sg[0] = 1;
    for (int i = 1; i < 5; ++i) sg[(size_t)i] = (best_mask >> (i - 1)) & 1 ? -1 : 1;
    for (int k = 0; k < 5; ++k) P(best_perm[(size_t)k], k) = sg[(size_t)k];
    *transform = u0 * P;
  }
  return best;
}

std::vector<std::pair<IVec, i64>> short_vectors(const IMat& h, i64 max_norm) {
  int n = 5;
  if (max_norm < 0) fail_invalid("short_vectors: negative bound");
  // H = sum_i d_i (x_i + sum_{j>i} q_ij x_j)^2 via symmetric elimination
  QMat A = to_q(to_z(h));
  std::array<std::array<mpq_class, 5>, 5> q{};
  std::array<mpq_class, 5> d{};
  for (int i = 0; i < n; ++i) {
    d[(size_t)i] = A(i, i);
    if (d[(size_t)i] <= 0) fail_invalid("short_vectors: form is not positive definite");
    for (int j = i + 1; j < n; ++j) q[(size_t)i][(size_t)j] = A(i, j) / A(i, i);
    for (int k = i + 1; k < n; ++k)
      for (int l = k; l < n; ++l) {
        A(k, l) -= A(i, k) * A(i, l) / A(i, i);
        A(l, k) = A(k, l);
      }
  }
  std::vector<std::pair<IVec, i64>> out;
  std::array<i64, 5> x{};
  std::function<void(int, const mpq_class&)> rec = [&](int i, const mpq_class& budget) {
    mpq_class c = 0;
    for (int j = i + 1; j < n; ++j) c += q[(size_t)i][(size_t)j] * x[(size_t)j];
    double s = std::sqrt(mpq_class(budget / d[(size_t)i]).get_d());
    double cd = c.get_d();
    i64 lo = (i64)std::floor(-cd - s) - 1, hi = (i64)std::ceil(-cd + s) + 1;
    for (i64 v = lo; v <= hi; ++v) {
      mpq_class term = d[(size_t)i] * (v + c) * (v + c);
      if (term > budget) continue;
      x[(size_t)i] = v;
      if (i == 0) {
        // canonical representative: first nonzero coordinate positive
        int fz = -1;
        for (int t = 0; t < n; ++t)
          if (x[(size_t)t] != 0) { fz = t; break; }
        if (fz < 0 || x[(size_t)fz] < 0) continue;
        i64 nrm = 0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) nrm += h(a, b) * x[(size_t)a] * x[(size_t)b];
        if (nrm > 0 && nrm <= max_norm) out.emplace_back(IVec(x.begin(), x.end()), nrm);
      } else {
        rec(i - 1, budget - term);
      }
    }
    x[(size_t)i] = 0;
  };
  rec(n - 1, mpq_class(max_norm));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second < b.second;
    return a.first < b.first;
  });
  return out;
}

std::vector<i64> theta_series(const IMat& h, int prec) {
  if (prec < 0) fail_invalid("theta_series: negative precision");
  std::vector<i64> r((size_t)prec + 1, 0);
  r[0] = 1;
  for (auto& [v, nrm] : short_vectors(h, 2 * (i64)prec)) {
    check(nrm % 2 == 0, "theta: odd bilinear norm on an even lattice");
    r[(size_t)(nrm / 2)] += 2;
  }
  return r;
}

namespace {

// Backtracking over norm-matched columns: find U with U^T h1 U = h2.
struct ColumnSearch {
  const IMat& h1;
  const IMat& h2;
  bool all;
  std::vector<std::array<i64, 5>> vec;   // candidates, both signs
  std::vector<std::array<i64, 5>> hvec;  // h1 * candidate
  std::map<i64, std::vector<int>> by_norm;
  std::array<int, 5> order{};
  std::array<int, 5> chosen{};
  std::vector<IMat> found;
  bool done = false;

  ColumnSearch(const IMat& a, const IMat& b, bool collect_all) : h1(a), h2(b), all(collect_all) {
    i64 maxn = 0;
    for (int j = 0; j < 5; ++j) maxn = std::max(maxn, b(j, j));
    for (auto& [v, nrm] : short_vectors(a, maxn)) {
      for (int sgn : {1, -1}) {
        std::array<i64, 5> w, hw;
        for (int i = 0; i < 5; ++i) w[(size_t)i] = sgn * v[(size_t)i];
        for (int i = 0; i < 5; ++i) {
          i64 s = 0;
          for (int j = 0; j < 5; ++j) s += a(i, j) * w[(size_t)j];
          hw[(size_t)i] = s;
        }
        by_norm[nrm].push_back((int)vec.size());
        vec.push_back(w);
        hvec.push_back(hw);
      }
    }
    // process scarce norms first
    std::array<int, 5> idx{0, 1, 2, 3, 4};
    std::sort(idx.begin(), idx.end(), [&](int p, int q) {
      size_t cp = by_norm.count(b(p, p)) ? by_norm[b(p, p)].size() : 0;
      size_t cq = by_norm.count(b(q, q)) ? by_norm[b(q, q)].size() : 0;
      if (cp != cq) return cp < cq;
      return p < q;
    });
    order = idx;
  }

  void run(int depth) {
    if (done) return;
    if (depth == 5) {
      IMat U(5, 5);
      for (int k = 0; k < 5; ++k)
        for (int i = 0; i < 5; ++i) U(i, order[(size_t)k]) = vec[(size_t)chosen[(size_t)k]][(size_t)i];
      found.push_back(U);
      if (!all) done = true;
      return;
    }
    int j = order[(size_t)depth];
    auto it = by_norm.find(h2(j, j));
    if (it == by_norm.end()) return;
    for (int idx : it->second) {
      bool ok = true;
      for (int l = 0; l < depth && ok; ++l) {
        int i = order[(size_t)l];
        i64 dot = 0;
        for (int t = 0; t < 5; ++t) dot += hvec[(size_t)idx][(size_t)t] * vec[(size_t)chosen[(size_t)l]][(size_t)t];
        if (dot != h2(i, j)) ok = false;
      }
      if (!ok) continue;
      chosen[(size_t)depth] = idx;
      run(depth + 1);
      if (done) return;
    }
  }
};

std::vector<i64> flat_key(const IMat& m) {
  std::vector<i64> k;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) k.push_back(m(i, j));
  return k;
}

// subgroup generated by gens inside a finite matrix group
std::set<std::vector<i64>> closure(const std::vector<IMat>& gens) {
  std::set<std::vector<i64>> seen;
  std::vector<IMat> queue{IMat::identity(5)};
  seen.insert(flat_key(queue[0]));
  while (!queue.empty()) {
    IMat m = queue.back();
    queue.pop_back();
    for (const IMat& g : gens) {
      IMat p = m * g;
      if (seen.insert(flat_key(p)).second) queue.push_back(p);
    }
  }
  return seen;
}

}  // namespace

IsometryGroup automorphism_group(const IMat& h) {
  require_form(h);
  ColumnSearch cs(h, h, true);
  cs.run(0);
  IsometryGroup g;
  g.elements = std::move(cs.found);
  std::sort(g.elements.begin(), g.elements.end(), [](const IMat& a, const IMat& b) {
    return flat_key(a) < flat_key(b);
  });
  g.order = (i64)g.elements.size();
  i64 proper = 0;
  for (const IMat& m : g.elements)
    if (det5(m) == 1) ++proper;
  g.proper_order = proper;
  check(g.order % 2 == 0 && proper * 2 == g.order, "automorphism group: -1 must split O into two classes");
  // greedy small generating set
  std::set<std::vector<i64>> have = closure({});
  for (const IMat& m : g.elements) {
    if (have.count(flat_key(m))) continue;
    g.generators.push_back(m);
    have = closure(g.generators);
    if ((i64)have.size() == g.order) break;
  }
  check((i64)have.size() == g.order, "automorphism group: generators do not generate");
  return g;
}

std::optional<IMat> isometry_map(const IMat& h1, const IMat& h2) {
  require_form(h1);
  require_form(h2);
  if (form_determinant(h1) != form_determinant(h2)) return std::nullopt;
  i64 maxd = 0;
  for (int j = 0; j < 5; ++j) maxd = std::max({maxd, h1(j, j), h2(j, j)});
  if (theta_series(h1, (int)(maxd / 2)) != theta_series(h2, (int)(maxd / 2))) return std::nullopt;
  ColumnSearch cs(h1, h2, false);
  cs.run(0);
  if (cs.found.empty()) return std::nullopt;
  IMat& u = cs.found.front();
  // sanity: congruence and unimodularity
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      i64 s = 0;
      for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b) s += u(a, i) * h1(a, b) * u(b, j);
      check(s == h2(i, j), "isometry_map: congruence check failed");
    }
  check(det5(u) == 1 || det5(u) == -1, "isometry_map: non-unimodular transform");
  return u;
}

}  // namespace omf5
