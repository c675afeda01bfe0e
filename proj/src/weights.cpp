#include "omf5/weights.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>

#include "omf5/forms.hpp"
#include "omf5/linalg.hpp"

namespace omf5 {

i64 weight_dimension(int a, int b) {
  if (b < 0 || a < b || ((a - b) % 2) != 0) fail_invalid("weight: need a >= b >= 0 with a = b mod 2");
  if (a > 6) fail_invalid("weight: a <= 6 is supported");
  i64 num = ((i64)(a + 2) * (a + 2) - (i64)(b + 1) * (b + 1)) * (a + 2) * (b + 1);
  check(num % 6 == 0, "weight dimension formula must be integral");
  return num / 6;
}

namespace {

using SCol = std::vector<std::pair<i64, mpz_class>>;

i64 pow5(int e) {
  i64 r = 1;
  while (e--) r *= 5;
  return r;
}

// number of semistandard tableaux of two-row shape (l1, l2) with entries in
// 1..5, by the hook content formula
i64 hook_content_count(int l1, int l2) {
  mpz_class num = 1, den = 1;
  for (int j = 0; j < l1; ++j) {
    num *= 5 + j;
    den *= (l1 - j) + (j < l2 ? 1 : 0);
  }
  for (int j = 0; j < l2; ++j) {
    num *= 5 + j - 1;
    den *= l2 - j;
  }
  mpz_class q = num / den;
  check(q * den == num, "hook content count must be integral");
  check(q.fits_slong_p(), "hook content overflow");
  return q.get_si();
}

// all semistandard fillings (values 0..4): rows weakly increasing, columns
// strictly increasing; slot order is row-major
std::vector<std::vector<int>> semistandard(int l1, int l2) {
  std::vector<std::vector<int>> rows1, rows2, out;
  std::vector<int> cur;
  std::function<void(int, int, int, std::vector<std::vector<int>>&)> weak =
      [&](int len, int pos, int minv, std::vector<std::vector<int>>& sink) {
        if (pos == len) {
          sink.push_back(cur);
          return;
        }
        for (int v = minv; v < 5; ++v) {
          cur.push_back(v);
          weak(len, pos + 1, v, sink);
          cur.pop_back();
        }
      };
  weak(l1, 0, 0, rows1);
  cur.clear();
  weak(l2, 0, 0, rows2);
  for (auto& r1 : rows1)
    for (auto& r2 : rows2) {
      bool ok = true;
      for (int j = 0; j < l2 && ok; ++j)
        if (r2[(size_t)j] <= r1[(size_t)j]) ok = false;
      if (!ok) continue;
      std::vector<int> t = r1;
      t.insert(t.end(), r2.begin(), r2.end());
      out.push_back(t);
    }
  return out;
}

// permutations of a slot set, returned as full slot maps
void extend_perms(std::vector<std::vector<int>>& acc, const std::vector<int>& slots) {
  std::vector<int> ord = slots;
  std::sort(ord.begin(), ord.end());
  std::vector<std::vector<int>> grown;
  do {
    for (const auto& base : acc) {
      std::vector<int> m = base;
      for (size_t k = 0; k < slots.size(); ++k) m[(size_t)slots[k]] = ord[k];
      grown.push_back(m);
    }
  } while (std::next_permutation(ord.begin(), ord.end()));
  acc = std::move(grown);
}

// Young symmetrizer image vector for filling T (slot -> value)
SCol symmetrize(const std::vector<int>& T, int a, const std::vector<std::vector<int>>& rowp,
                const std::vector<std::pair<std::vector<int>, int>>& colp) {
  std::map<i64, mpz_class> acc;
  std::vector<int> val((size_t)a);
  for (const auto& [q, sgn] : colp)
    for (const auto& p : rowp) {
      for (int s = 0; s < a; ++s) val[(size_t)s] = T[(size_t)p[(size_t)q[(size_t)s]]];
      i64 idx = 0;
      for (int s = 0; s < a; ++s) idx = idx * 5 + val[(size_t)s];
      acc[idx] += sgn;
    }
  SCol out;
  for (auto& [i, c] : acc)
    if (c != 0) out.emplace_back(i, c);
  return out;
}

// incremental dense Gaussian elimination mod q over candidate coordinates
struct RankTracker {
  u64 q;
  std::vector<std::vector<u64>> rows;  // reduced rows
  std::vector<int> lead;               // pivot column of each reduced row
  int rank = 0;
  explicit RankTracker(u64 qq) : q(qq) {}
  bool add(std::vector<u64> r) {
    for (size_t k = 0; k < rows.size(); ++k) {
      u64 f = r[(size_t)lead[k]];
      if (f == 0) continue;
      const auto& pr = rows[k];
      for (size_t j = 0; j < r.size(); ++j)
        if (pr[j]) r[j] = submod_u64(r[j], mulmod_u64(f, pr[j], q), q);
    }
    int l = -1;
    for (size_t j = 0; j < r.size(); ++j)
      if (r[j] != 0) { l = (int)j; break; }
    if (l < 0) return false;
    u64 inv = invmod_u64(r[(size_t)l], q);
    for (auto& x : r) x = mulmod_u64(x, inv, q);
    rows.push_back(std::move(r));
    lead.push_back(l);
    ++rank;
    return true;
  }
};

// contraction of a sparse ambient vector in slots (s,t) against gram
std::map<i64, mpz_class> contract(const SCol& v, int a, int s, int t, const IMat& gram) {
  std::map<i64, mpz_class> out;
  for (const auto& [idx, c] : v) {
    // digits of idx, most significant = slot 0
    std::array<int, 8> dg{};
    i64 x = idx;
    for (int k = a - 1; k >= 0; --k) {
      dg[(size_t)k] = (int)(x % 5);
      x /= 5;
    }
    i64 w = gram(dg[(size_t)s], dg[(size_t)t]);
    if (w == 0) continue;
    i64 ridx = 0;
    for (int k = 0; k < a; ++k) {
      if (k == s || k == t) continue;
      ridx = ridx * 5 + dg[(size_t)k];
    }
    out[ridx] += c * w;
  }
  for (auto it = out.begin(); it != out.end();)
    it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

}  // namespace

WeightRep build_weight(int a, int b, const IMat& h) {
  require_form(h);
  WeightRep w;
  w.a = a;
  w.b = b;
  w.dim = weight_dimension(a, b);
  w.ambient = pow5(a);
  w.gram = h;

  int l1 = (a + b) / 2, l2 = (a - b) / 2;
  auto fillings = semistandard(l1, l2);
  i64 schur = hook_content_count(l1, l2);
  check((i64)fillings.size() == schur, "semistandard count disagrees with hook content formula");

  // slot permutation groups of the two-row tableau (slots row-major)
  std::vector<int> id((size_t)a);
  for (int s = 0; s < a; ++s) id[(size_t)s] = s;
  std::vector<std::vector<int>> rowp{id};
  std::vector<int> r1, r2;
  for (int s = 0; s < l1; ++s) r1.push_back(s);
  for (int s = l1; s < a; ++s) r2.push_back(s);
  if (r1.size() > 1) extend_perms(rowp, r1);
  if (r2.size() > 1) extend_perms(rowp, r2);
  std::vector<std::pair<std::vector<int>, int>> colp;
  for (int mask = 0; mask < (1 << l2); ++mask) {
    std::vector<int> m = id;
    int sgn = 1;
    for (int j = 0; j < l2; ++j)
      if (mask >> j & 1) {
        std::swap(m[(size_t)j], m[(size_t)(l1 + j)]);
        sgn = -sgn;
      }
    colp.emplace_back(m, sgn);
  }

  std::vector<SCol> cands;
  for (const auto& T : fillings) cands.push_back(symmetrize(T, a, rowp, colp));

  // independence of the candidate family (certifies they are a basis of the
  // Schur module, whose dimension is the hook content count)
  {
    u64 q = nth_solver_prime(0);
    // sparse elimination keyed by ambient index
    std::vector<std::map<i64, u64>> rows;
    std::map<i64, size_t> pivot_of;
    int rank = 0;
    for (const auto& c : cands) {
      std::map<i64, u64> r;
      for (auto& [i, v] : c) {
        u64 m = mpz_fdiv_ui(v.get_mpz_t(), q);
        if (m) r[i] = m;
      }
      while (!r.empty()) {
        i64 lead = r.begin()->first;
        auto it = pivot_of.find(lead);
        if (it == pivot_of.end()) {
          u64 inv = invmod_u64(r.begin()->second, q);
          for (auto& [i, v] : r) v = mulmod_u64(v, inv, q);
          pivot_of[lead] = rows.size();
          rows.push_back(std::move(r));
          ++rank;
          break;
        }
        u64 f = r.begin()->second;
        for (const auto& [i, v] : rows[it->second]) {
          u64& x = r[i];
          x = submod_u64(x, mulmod_u64(f, v, q), q);
          if (x == 0) r.erase(i);
        }
      }
    }
    check(rank == (int)cands.size(), "candidate tableaux vectors are not independent");
  }

  // kernel of the contraction constraints inside the candidate span
  ZMat kernel;
  if (a < 2) {
    // no contractions: W is the whole Schur module
    check(schur == w.dim, "harmonic dimension mismatch for a < 2");
    kernel = ZMat((int)cands.size(), (int)cands.size());
    for (int i = 0; i < kernel.rows(); ++i) kernel(i, i) = 1;
  } else {
    i64 target = schur - w.dim;
    std::vector<std::vector<mpz_class>> rows_z;
    bool reached = false;
    for (int attempt = 0; attempt < 3 && !reached; ++attempt) {
      rows_z.clear();
      RankTracker rt(nth_solver_prime(attempt));
      for (int s = 0; s < a && !reached; ++s)
        for (int t = s + 1; t < a && !reached; ++t) {
          // rows of the (s,t)-contraction, indexed by reduced multi-index
          std::map<i64, std::vector<mpz_class>> block;
          for (size_t k = 0; k < cands.size(); ++k) {
            auto con = contract(cands[k], a, s, t, h);
            for (auto& [ridx, c] : con) {
              auto& row = block[ridx];
              if (row.empty()) row.assign(cands.size(), mpz_class(0));
              row[k] = c;
            }
          }
          for (auto& [ridx, row] : block) {
            std::vector<u64> rm(cands.size());
            for (size_t k = 0; k < cands.size(); ++k) rm[k] = mpz_fdiv_ui(row[k].get_mpz_t(), rt.q);
            if (rt.add(std::move(rm))) {
              rows_z.push_back(row);
              if (rt.rank == (int)target) reached = true;
            }
          }
        }
      if ((i64)rows_z.size() == target) reached = true;
    }
    check(reached, "contraction constraints did not reach the expected rank");
    ZMat M((int)rows_z.size(), (int)cands.size());
    for (int i = 0; i < M.rows(); ++i)
      for (int j = 0; j < M.cols(); ++j) M(i, j) = rows_z[(size_t)i][(size_t)j];
    kernel = nullspace_saturated(M);
  }
  check(kernel.cols() == (int)w.dim, "harmonic kernel dimension mismatch");

  // expand kernel columns into ambient sparse vectors
  for (int j = 0; j < kernel.cols(); ++j) {
    std::map<i64, mpz_class> acc;
    for (int k = 0; k < kernel.rows(); ++k) {
      if (kernel(k, j) == 0) continue;
      for (const auto& [i, c] : cands[(size_t)k]) acc[i] += kernel(k, j) * c;
    }
    SCol col;
    for (auto& [i, c] : acc)
      if (c != 0) col.emplace_back(i, c);
    check(!col.empty(), "zero basis column");
    w.basis.push_back(std::move(col));
  }

  // exact certificate: every contraction kills every basis column
  for (int s = 0; s < a; ++s)
    for (int t = s + 1; t < a; ++t)
      for (const auto& col : w.basis)
        check(contract(col, a, s, t, h).empty(), "basis column fails a contraction");

  // pivot rows: a dim x dim invertible minor of the basis matrix
  {
    std::vector<i64> support;
    for (const auto& col : w.basis)
      for (const auto& [i, c] : col) support.push_back(i);
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    std::map<i64, int> spos;
    for (size_t k = 0; k < support.size(); ++k) spos[support[k]] = (int)k;
    u64 q = nth_solver_prime(0);
    UMat A((int)w.dim, (int)support.size());
    for (size_t j = 0; j < w.basis.size(); ++j)
      for (const auto& [i, c] : w.basis[j]) A((int)j, spos[i]) = mpz_fdiv_ui(c.get_mpz_t(), q);
    auto piv = rref_mod(A, q);
    check((i64)piv.size() == w.dim, "basis matrix is column rank deficient");
    for (int p : piv) w.pivot_rows.push_back(support[(size_t)p]);
    QMat P((int)w.dim, (int)w.dim);
    for (size_t j = 0; j < w.basis.size(); ++j) {
      std::map<i64, const mpz_class*> look;
      for (const auto& [i, c] : w.basis[j]) look[i] = &c;
      for (size_t r = 0; r < w.pivot_rows.size(); ++r) {
        auto it = look.find(w.pivot_rows[r]);
        P((int)r, (int)j) = it == look.end() ? mpq_class(0) : mpq_class(*it->second);
      }
    }
    w.pivot_inv = inverse_q(P);
  }
  return w;
}

QMat weight_action(const WeightRep& w, const QMat& g) {
  if (g.rows() != 5 || g.cols() != 5) fail_invalid("weight action: expected a 5x5 matrix");
  // write g = G / d with integer G
  mpz_class d = 1;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) d = lcm(d, g(i, j).get_den());
  ZMat G(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      mpq_class t = g(i, j) * d;
      check(t.get_den() == 1, "denominator clearing failed");
      G(i, j) = t.get_num();
    }
  mpq_class detg(det_bareiss(G));
  for (int i = 0; i < 5; ++i) detg /= d;
  check(detg != 0, "weight action: singular matrix");
  // scale factor det(g)^a / d^a
  mpq_class scale = 1;
  for (int i = 0; i < w.a; ++i) scale *= detg / d;

  int n = (int)w.dim;
  QMat R(n, n);
  std::vector<mpz_class> y((size_t)w.ambient);
  for (int col = 0; col < n; ++col) {
    std::fill(y.begin(), y.end(), mpz_class(0));
    for (const auto& [i, c] : w.basis[(size_t)col]) y[(size_t)i] = c;
    // apply G slot by slot
    i64 stride = w.ambient / 5;
    for (int s = 0; s < w.a; ++s) {
      std::vector<mpz_class> y2((size_t)w.ambient);
      for (i64 hi = 0; hi < w.ambient / (5 * stride); ++hi)
        for (i64 lo = 0; lo < stride; ++lo) {
          i64 base = hi * 5 * stride + lo;
          for (int r = 0; r < 5; ++r) {
            mpz_class s2 = 0;
            for (int m = 0; m < 5; ++m)
              if (G(r, m) != 0 && y[(size_t)(base + m * stride)] != 0)
                s2 += G(r, m) * y[(size_t)(base + m * stride)];
            y2[(size_t)(base + r * stride)] = s2;
          }
        }
      y = std::move(y2);
      stride /= 5;
    }
    // coordinates via the pivot minor
    QMat yp(n, 1);
    for (int r = 0; r < n; ++r) yp(r, 0) = mpq_class(y[(size_t)w.pivot_rows[(size_t)r]]);
    QMat x = w.pivot_inv * yp;
    // exact containment: basis * x must reproduce y on every ambient row
    std::map<i64, mpq_class> recon;
    for (int k = 0; k < n; ++k) {
      if (x(k, 0) == 0) continue;
      for (const auto& [i, c] : w.basis[(size_t)k]) recon[i] += x(k, 0) * c;
    }
    for (auto& [i, v] : recon) check(v == y[(size_t)i], "weight action left the subspace");
    for (i64 i = 0; i < w.ambient; ++i)
      if (y[(size_t)i] != 0) check(recon.count(i) && recon[i] == y[(size_t)i], "weight action left the subspace");
    for (int r = 0; r < n; ++r) R(r, col) = scale * x(r, 0);
  }
  return R;
}

}  // namespace omf5
