#include "omf5/linalg.hpp"

#include <algorithm>

namespace omf5 {

std::vector<int> rref_mod(UMat& A, u64 p) {
  int R = A.rows(), C = A.cols();
  for (int i = 0; i < R; ++i)
    for (int j = 0; j < C; ++j) A(i, j) %= p;
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < C && r < R; ++c) {
    int pr = -1;
    for (int i = r; i < R; ++i)
      if (A(i, c)) { pr = i; break; }
    if (pr < 0) continue;
    if (pr != r)
      for (int j = 0; j < C; ++j) std::swap(A(r, j), A(pr, j));
    u64 inv = invmod_u64(A(r, c), p);
    for (int j = 0; j < C; ++j) A(r, j) = mulmod_u64(A(r, j), inv, p);
    for (int i = 0; i < R; ++i) {
      if (i == r || !A(i, c)) continue;
      u64 f = A(i, c);
      for (int j = 0; j < C; ++j) A(i, j) = submod_u64(A(i, j), mulmod_u64(f, A(r, j), p), p);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

int rank_mod(UMat A, u64 p) { return (int)rref_mod(A, p).size(); }

UMat nullspace_mod(const UMat& A0, u64 p) {
  UMat A = A0;
  std::vector<int> pivots = rref_mod(A, p);
  int C = A.cols();
  std::vector<bool> is_pivot(C, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<int> free_cols;
  for (int c = 0; c < C; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  UMat K(C, (int)free_cols.size());
  for (size_t t = 0; t < free_cols.size(); ++t) {
    int f = free_cols[t];
    K(f, (int)t) = 1;
    for (size_t k = 0; k < pivots.size(); ++k)
      K(pivots[k], (int)t) = A((int)k, f) ? p - A((int)k, f) : 0;
  }
  return K;
}

std::vector<u64> charpoly_mod(UMat A, u64 p) {
  int n = A.rows();
  if (n != A.cols()) fail_invalid("charpoly: matrix must be square");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) %= p;
  // Similarity reduction to upper Hessenberg form.
  for (int j = 0; j + 2 < n; ++j) {
    int piv = -1;
    for (int i = j + 1; i < n; ++i)
      if (A(i, j)) { piv = i; break; }
    if (piv < 0) continue;
    if (piv != j + 1) {
      for (int c = 0; c < n; ++c) std::swap(A(j + 1, c), A(piv, c));
      for (int r = 0; r < n; ++r) std::swap(A(r, j + 1), A(r, piv));
    }
    u64 inv = invmod_u64(A(j + 1, j), p);
    for (int i = j + 2; i < n; ++i) {
      u64 f = mulmod_u64(A(i, j), inv, p);
      if (!f) continue;
      for (int c = 0; c < n; ++c) A(i, c) = submod_u64(A(i, c), mulmod_u64(f, A(j + 1, c), p), p);
      for (int r = 0; r < n; ++r) A(r, j + 1) = addmod_u64(A(r, j + 1), mulmod_u64(f, A(r, i), p), p);
    }
  }
  // Charpolys of leading principal blocks of a Hessenberg matrix.
  std::vector<std::vector<u64>> P(n + 1);
  P[0] = {1};
  for (int k = 1; k <= n; ++k) {
    std::vector<u64> pk(P[k - 1].size() + 1, 0);
    u64 a = A(k - 1, k - 1);
    for (size_t t = 0; t < P[k - 1].size(); ++t) {
      pk[t + 1] = addmod_u64(pk[t + 1], P[k - 1][t], p);
      pk[t] = submod_u64(pk[t], mulmod_u64(a, P[k - 1][t], p), p);
    }
    u64 prod = 1;
    for (int i = k - 1; i >= 1; --i) {
      prod = mulmod_u64(prod, A(i, i - 1), p);
      if (!prod) break;
      u64 coef = mulmod_u64(A(i - 1, k - 1), prod, p);
      if (coef)
        for (size_t t = 0; t < P[i - 1].size(); ++t)
          pk[t] = submod_u64(pk[t], mulmod_u64(coef, P[i - 1][t], p), p);
    }
    P[k] = std::move(pk);
  }
  return P[n];
}

mpz_class det_bareiss(ZMat A) {
  int n = A.rows();
  if (n != A.cols()) fail_invalid("det: matrix must be square");
  if (n == 0) return 1;
  mpz_class prev = 1;
  int sign = 1;
  for (int k = 0; k + 1 < n; ++k) {
    if (A(k, k) == 0) {
      int piv = -1;
      for (int i = k + 1; i < n; ++i)
        if (A(i, k) != 0) { piv = i; break; }
      if (piv < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(A(k, j), A(piv, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        mpz_class t = A(i, j) * A(k, k) - A(i, k) * A(k, j);
        mpz_divexact(A(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    prev = A(k, k);
  }
  return sign > 0 ? A(n - 1, n - 1) : -A(n - 1, n - 1);
}

QMat solve_q(QMat A, QMat B) {
  int n = A.rows();
  if (A.cols() != n || B.rows() != n) fail_invalid("solve: shape mismatch");
  int m = B.cols();
  for (int k = 0; k < n; ++k) {
    int piv = -1;
    for (int i = k; i < n; ++i)
      if (A(i, k) != 0) { piv = i; break; }
    if (piv < 0) fail_invalid("solve: singular matrix");
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(A(k, j), A(piv, j));
      for (int j = 0; j < m; ++j) std::swap(B(k, j), B(piv, j));
    }
    mpq_class inv = 1 / A(k, k);
    for (int j = 0; j < n; ++j) A(k, j) *= inv;
    for (int j = 0; j < m; ++j) B(k, j) *= inv;
    for (int i = 0; i < n; ++i) {
      if (i == k || A(i, k) == 0) continue;
      mpq_class f = A(i, k);
      for (int j = 0; j < n; ++j) A(i, j) -= f * A(k, j);
      for (int j = 0; j < m; ++j) B(i, j) -= f * B(k, j);
    }
  }
  return B;
}

QMat inverse_q(const QMat& A) { return solve_q(A, QMat::identity(A.rows())); }

ZMat hnf_rows(ZMat A) {
  int R = A.rows(), C = A.cols();
  int r = 0;
  for (int c = 0; c < C && r < R; ++c) {
    int piv = -1;
    for (int i = r; i < R; ++i)
      if (A(i, c) != 0) { piv = i; break; }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < C; ++j) std::swap(A(r, j), A(piv, j));
    for (int i = r + 1; i < R; ++i) {
      if (A(i, c) == 0) continue;
      mpz_class a = A(r, c), b = A(i, c), g, x, y;
      mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      mpz_class ag = a / g, bg = b / g;
      for (int j = 0; j < C; ++j) {
        mpz_class rr = x * A(r, j) + y * A(i, j);
        mpz_class ri = ag * A(i, j) - bg * A(r, j);
        A(r, j) = rr;
        A(i, j) = ri;
      }
    }
    if (A(r, c) < 0)
      for (int j = 0; j < C; ++j) A(r, j) = -A(r, j);
    for (int i = 0; i < r; ++i) {
      if (A(i, c) == 0) continue;
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), A(i, c).get_mpz_t(), A(r, c).get_mpz_t());
      if (q != 0)
        for (int j = 0; j < C; ++j) A(i, j) -= q * A(r, j);
    }
    ++r;
  }
  ZMat H(r, C);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < C; ++j) H(i, j) = A(i, j);
  return H;
}

ZMat integer_kernel(const ZMat& A) {
  // Rows of [A^T | I]; HNF rows whose A^T-part vanished carry a kernel basis.
  int k = A.rows(), n = A.cols();
  ZMat S(n, k + n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) S(i, j) = A(j, i);
    S(i, k + i) = 1;
  }
  ZMat H = hnf_rows(std::move(S));
  std::vector<int> krows;
  for (int i = 0; i < H.rows(); ++i) {
    bool zero = true;
    for (int j = 0; j < k && zero; ++j)
      if (H(i, j) != 0) zero = false;
    if (zero) krows.push_back(i);
  }
  ZMat K(n, (int)krows.size());
  for (size_t t = 0; t < krows.size(); ++t)
    for (int j = 0; j < n; ++j) K(j, (int)t) = H(krows[t], k + j);
  return K;
}

namespace {

void mod_into(mpz_class& x, const mpz_class& m) {
  mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
}

// unit u of Z/m with u * e = gcd(e, m) mod m, for 0 < e < m
mpz_class stab_unit(const mpz_class& e, const mpz_class& m) {
  mpz_class d = gcd(e, m), ep = e / d, mp = m / d, u = 1;
  if (mp != 1) {
    int ok = mpz_invert(u.get_mpz_t(), ep.get_mpz_t(), mp.get_mpz_t());
    check(ok != 0, "stab_unit: e/d must be invertible mod m/d");
  }
  // adjust by multiples of m/d (keeps u*e = d mod m) until u is a unit mod m
  int guard = 0;
  while (gcd(u, m) != 1) {
    u += mp;
    check(++guard < 1000000, "stab_unit: no unit representative found");
  }
  return u;
}

// Row Howell form over Z/m: entries stay reduced into [0, m).  Returns the
// echelon rows; their span is the input span as a Z/m-module, and every span
// element supported on trailing columns is a combination of the trailing rows.
std::vector<ZVec> howell_mod(std::vector<ZVec> rows, const mpz_class& m, int ncols) {
  for (auto& r : rows)
    for (auto& x : r) mod_into(x, m);
  size_t rk = 0;
  for (int c = 0; c < ncols; ++c) {
    size_t piv = SIZE_MAX;
    for (size_t i = rk; i < rows.size(); ++i) {
      if (rows[i][(size_t)c] == 0) continue;
      if (piv == SIZE_MAX) {
        piv = i;
        continue;
      }
      mpz_class a = rows[piv][(size_t)c], b = rows[i][(size_t)c], g, x, y;
      mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      mpz_class ag = a / g, bg = b / g;
      for (int j = c; j < ncols; ++j) {
        mpz_class np = x * rows[piv][(size_t)j] + y * rows[i][(size_t)j];
        mpz_class no = ag * rows[i][(size_t)j] - bg * rows[piv][(size_t)j];
        mod_into(np, m);
        mod_into(no, m);
        rows[piv][(size_t)j] = np;
        rows[i][(size_t)j] = no;
      }
    }
    if (piv == SIZE_MAX) continue;
    std::swap(rows[piv], rows[rk]);
    mpz_class d = gcd(rows[rk][(size_t)c], m);
    if (rows[rk][(size_t)c] != d) {
      mpz_class u = stab_unit(rows[rk][(size_t)c], m);
      for (int j = c; j < ncols; ++j) {
        rows[rk][(size_t)j] *= u;
        mod_into(rows[rk][(size_t)j], m);
      }
    }
    check(rows[rk][(size_t)c] == d, "howell_mod: pivot normalization failed");
    // annihilator of the pivot row keeps the Howell property for later columns
    mpz_class f = m / d;
    if (f != 1) {
      ZVec ann((size_t)ncols, mpz_class(0));
      bool nz = false;
      for (int j = c; j < ncols; ++j) {
        ann[(size_t)j] = rows[rk][(size_t)j] * f;
        mod_into(ann[(size_t)j], m);
        nz = nz || ann[(size_t)j] != 0;
      }
      if (nz) rows.push_back(std::move(ann));
    }
    for (size_t i = 0; i < rk; ++i) {
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), rows[i][(size_t)c].get_mpz_t(), d.get_mpz_t());
      if (q == 0) continue;
      for (int j = c; j < ncols; ++j) {
        rows[i][(size_t)j] -= q * rows[rk][(size_t)j];
        mod_into(rows[i][(size_t)j], m);
      }
    }
    ++rk;
  }
  rows.resize(rk);
  return rows;
}

}  // namespace

ZMat lattice_kernel_mod(const ZMat& A, const mpz_class& m) {
  check(m > 0, "lattice_kernel_mod: modulus must be positive");
  int k = A.rows(), n = A.cols();
  ZMat B(n, n);
  if (m == 1) {
    for (int i = 0; i < n; ++i) B(i, i) = 1;
    return B;
  }
  // Howell form of [A^T | I] over Z/m; rows supported on the identity block
  // span {x : A x = 0 mod m} as a Z/m-module
  std::vector<ZVec> rows((size_t)n, ZVec((size_t)(k + n), mpz_class(0)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) rows[(size_t)i][(size_t)j] = A(j, i);
    rows[(size_t)i][(size_t)(k + i)] = 1;
  }
  auto H = howell_mod(std::move(rows), m, k + n);
  // triangular lattice basis: lifted kernel rows where they lead, m*e_j elsewhere
  std::vector<std::pair<int, size_t>> leads;
  for (size_t t = 0; t < H.size(); ++t) {
    int l = -1;
    for (int j = 0; j < k + n; ++j)
      if (H[t][(size_t)j] != 0) { l = j; break; }
    if (l >= k) leads.emplace_back(l - k, t);
  }
  size_t t = 0;
  for (int j = 0; j < n; ++j) {
    if (t < leads.size() && leads[t].first == j) {
      for (int i = 0; i < n; ++i) B(i, j) = H[leads[t].second][(size_t)(k + i)];
      ++t;
    } else {
      B(j, j) = m;
    }
  }
  check(t == leads.size(), "lattice_kernel_mod: echelon structure broken");
  ZMat R = hnf_cols(B);
  if (R.cols() != n) fail_inconsistent("lattice_kernel_mod: unexpected rank");
  // every basis column must actually solve A x = 0 mod m
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < k; ++i) {
      mpz_class s = 0;
      for (int l = 0; l < n; ++l) s += A(i, l) * R(l, j);
      check(s % m == 0, "lattice_kernel_mod: column is not a solution");
    }
  return R;
}

ZVec snf_divisors(ZMat A) {
  int R = A.rows(), C = A.cols();
  int n = std::min(R, C);
  std::vector<mpz_class> diag;
  int t = 0;
  while (t < n) {
    // find a nonzero entry in the trailing submatrix
    int pi = -1, pj = -1;
    for (int i = t; i < R && pi < 0; ++i)
      for (int j = t; j < C; ++j)
        if (A(i, j) != 0) { pi = i; pj = j; break; }
    if (pi < 0) break;
    for (int j = 0; j < C; ++j) std::swap(A(t, j), A(pi, j));
    for (int i = 0; i < R; ++i) std::swap(A(i, t), A(i, pj));
    bool again = true;
    int guard = 0;
    while (again) {
      if (++guard > 10000) fail_inconsistent("snf: no convergence");
      again = false;
      for (int i = t + 1; i < R; ++i) {
        if (A(i, t) == 0) continue;
        mpz_class a = A(t, t), b = A(i, t);
        if (b % a == 0) {
          // plain elimination keeps the pivot row fixed (guarantees progress)
          mpz_class f = b / a;
          for (int j = 0; j < C; ++j) A(i, j) -= f * A(t, j);
          continue;
        }
        mpz_class g, x, y;
        mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        mpz_class ag = a / g, bg = b / g;
        for (int j = 0; j < C; ++j) {
          mpz_class rt = x * A(t, j) + y * A(i, j);
          mpz_class ri = ag * A(i, j) - bg * A(t, j);
          A(t, j) = rt;
          A(i, j) = ri;
        }
      }
      for (int j = t + 1; j < C; ++j) {
        if (A(t, j) == 0) continue;
        mpz_class a = A(t, t), b = A(t, j);
        if (b % a == 0) {
          mpz_class f = b / a;
          for (int i = 0; i < R; ++i) A(i, j) -= f * A(i, t);
          continue;
        }
        mpz_class g, x, y;
        mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        mpz_class ag = a / g, bg = b / g;
        for (int i = 0; i < R; ++i) {
          mpz_class ct = x * A(i, t) + y * A(i, j);
          mpz_class cj = ag * A(i, j) - bg * A(i, t);
          A(i, t) = ct;
          A(i, j) = cj;
        }
        // column ops may have disturbed column t below row t
        for (int i = t + 1; i < R; ++i)
          if (A(i, t) != 0) { again = true; }
      }
    }
    diag.push_back(abs(A(t, t)));
    ++t;
  }
  while ((int)diag.size() < n) diag.push_back(0);
  // enforce the divisibility chain
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i + 1 < diag.size(); ++i) {
      if (diag[i + 1] == 0) continue;
      if (diag[i] == 0) { std::swap(diag[i], diag[i + 1]); changed = true; continue; }
      if (diag[i + 1] % diag[i] != 0) {
        mpz_class g, l;
        mpz_gcd(g.get_mpz_t(), diag[i].get_mpz_t(), diag[i + 1].get_mpz_t());
        l = diag[i] / g * diag[i + 1];
        diag[i] = g;
        diag[i + 1] = l;
        changed = true;
      }
    }
  }
  return diag;
}

bool rational_reconstruct(const mpz_class& r0, const mpz_class& M, mpq_class& out) {
  mpz_class bound;
  mpz_class m2 = (M - 1) / 2;
  mpz_sqrt(bound.get_mpz_t(), m2.get_mpz_t());
  mpz_class a = M, b = r0 % M;
  if (b < 0) b += M;
  mpz_class x0 = 0, x1 = 1;
  while (b > bound) {
    mpz_class q = a / b;
    mpz_class t = a - q * b;
    a = b; b = t;
    t = x0 - q * x1;
    x0 = x1; x1 = t;
  }
  if (x1 == 0) return false;
  mpz_class den = x1, num = b;
  if (den < 0) { den = -den; num = -num; }
  if (den > bound) return false;
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (g != 1 && num != 0) return false;
  if (num == 0 && den != 1) return false;
  out = mpq_class(num) / mpq_class(den);
  out.canonicalize();
  return true;
}

mpz_class crt_pair(const mpz_class& r1, const mpz_class& m1, const mpz_class& r2, const mpz_class& m2) {
  // x = r1 mod m1, x = r2 mod m2, gcd(m1,m2)=1; result in [0, m1 m2)
  mpz_class g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), m1.get_mpz_t(), m2.get_mpz_t());
  if (g != 1) fail_invalid("crt: moduli not coprime");
  mpz_class M = m1 * m2;
  mpz_class x = r1 + m1 * (((r2 - r1) * s) % m2);
  x %= M;
  if (x < 0) x += M;
  return x;
}

u64 nth_solver_prime(int i) {
  static std::vector<u64> primes;
  if (primes.empty()) primes.push_back(next_prime_u64(1ull << 62));
  while ((int)primes.size() <= i) primes.push_back(next_prime_u64(primes.back()));
  return primes[(size_t)i];
}

namespace {

// Shared tail of the saturated-kernel computation: given the RREF pivot
// structure and the exact rational solution entries (pivot coordinate k of
// the solution attached to free column f), produce a basis of the saturated
// kernel lattice.
ZMat assemble_saturated(int n, const std::vector<int>& pivots, const std::vector<int>& free_cols,
                        const QMat& sol, const std::function<ZVec(const ZVec&)>& mulvec) {
  int r = (int)pivots.size(), k = (int)free_cols.size();
  mpz_class delta = 1;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < k; ++j)
      mpz_lcm(delta.get_mpz_t(), delta.get_mpz_t(), sol(i, j).get_den().get_mpz_t());
  ZMat out(n, k);
  if (delta == 1) {
    for (int j = 0; j < k; ++j) {
      out(free_cols[j], j) = 1;
      for (int i = 0; i < r; ++i) out(pivots[i], j) = sol(i, j).get_num();
    }
    return out;
  }
  ZMat Aint(r, k);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < k; ++j) {
      mpq_class v = sol(i, j) * mpq_class(delta);
      if (v.get_den() != 1) fail_inconsistent("saturation: lcm of denominators is wrong");
      Aint(i, j) = v.get_num();
    }
  ZMat U = lattice_kernel_mod(Aint, delta);
  ZMat res(n, U.cols());
  for (int c = 0; c < U.cols(); ++c) {
    for (int j = 0; j < k; ++j) res(free_cols[j], c) = U(j, c);
    for (int i = 0; i < r; ++i) {
      mpq_class acc = 0;
      for (int j = 0; j < k; ++j)
        if (U(j, c) != 0) acc += sol(i, j) * mpq_class(U(j, c));
      if (acc.get_den() != 1) fail_inconsistent("saturation: non-integral pivot coordinate");
      res(pivots[i], c) = acc.get_num();
    }
    ZVec img = mulvec(res.col(c));
    for (const auto& e : img)
      if (e != 0) fail_inconsistent("saturation: basis vector not in kernel");
  }
  return res;
}

}  // namespace

ZMat nullspace_saturated_fn(int rows, int cols, const std::function<UMat(u64)>& reduce,
                            const std::function<ZVec(const ZVec&)>& mulvec) {
  // Pivot structure from the first usable prime; refined if a later prime
  // reveals a larger rank (rank mod q never exceeds the true rank).
  std::vector<int> pivots, free_cols;
  int prime_base = 0;
  auto compute_structure = [&](int base) {
    UMat R = reduce(nth_solver_prime(base));
    pivots = rref_mod(R, nth_solver_prime(base));
    std::vector<bool> is_p(cols, false);
    for (int c : pivots) is_p[c] = true;
    free_cols.clear();
    for (int c = 0; c < cols; ++c)
      if (!is_p[c]) free_cols.push_back(c);
  };
  compute_structure(0);

  for (int rounds = 0; rounds < 12; ++rounds) {
    int nprimes = 1 << rounds;
    // residues (i,j): coordinate pivots[i] of the solution for free col j
    int r = (int)pivots.size(), k = (int)free_cols.size();
    ZMat resid(r, k);
    mpz_class modulus = 1;
    bool structure_ok = true;
    int used = 0, pi = prime_base;
    while (used < nprimes) {
      u64 q = nth_solver_prime(pi++);
      if (pi > prime_base + 4 * nprimes + 16) { structure_ok = false; break; }
      UMat R = reduce(q);
      std::vector<int> piv_q = rref_mod(R, q);
      if ((int)piv_q.size() > r) {
        // previous structure prime was unlucky; restart from this prime
        prime_base = pi - 1;
        compute_structure(prime_base);
        structure_ok = false;
        break;
      }
      if (piv_q != pivots) continue;  // unlucky prime, skip
      mpz_class qz((unsigned long)q);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < k; ++j) {
          u64 v = R(i, free_cols[j]);
          mpz_class rv = v ? mpz_class((unsigned long)(q - v)) : mpz_class(0);
          resid(i, j) = (used == 0) ? rv : crt_pair(resid(i, j), modulus, rv, qz);
        }
      modulus *= qz;
      ++used;
    }
    if (!structure_ok) continue;
    // rational reconstruction of every entry, then exact verification
    QMat sol(r, k);
    bool ok = true;
    for (int i = 0; i < r && ok; ++i)
      for (int j = 0; j < k && ok; ++j)
        if (!rational_reconstruct(resid(i, j), modulus, sol(i, j))) ok = false;
    if (ok) {
      for (int j = 0; j < k && ok; ++j) {
        mpz_class den = 1;
        for (int i = 0; i < r; ++i) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), sol(i, j).get_den().get_mpz_t());
        ZVec x((size_t)cols, mpz_class(0));
        x[free_cols[j]] = den;
        for (int i = 0; i < r; ++i) {
          mpq_class v = sol(i, j) * mpq_class(den);
          x[pivots[i]] = v.get_num();
        }
        ZVec img = mulvec(x);
        for (const auto& e : img)
          if (e != 0) { ok = false; break; }
      }
    }
    if (ok) return assemble_saturated(cols, pivots, free_cols, sol, mulvec);
  }
  fail_inconsistent("nullspace_saturated: reconstruction did not converge");
}

ZMat nullspace_saturated(const ZMat& A) {
  // Column-sparse view for cheap exact verification.
  int rows = A.rows(), cols = A.cols();
  std::vector<std::vector<std::pair<int, const mpz_class*>>> colnz(cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i)
      if (A(i, j) != 0) colnz[j].push_back({i, &A(i, j)});
  auto reduce = [&](u64 q) { return reduce_mod(A, q); };
  auto mulvec = [&](const ZVec& x) {
    ZVec y((size_t)rows, mpz_class(0));
    for (int j = 0; j < cols; ++j) {
      if (x[j] == 0) continue;
      for (auto& [i, v] : colnz[j]) y[i] += *v * x[j];
    }
    return y;
  };
  return nullspace_saturated_fn(rows, cols, reduce, mulvec);
}

ZMat saturate_columns(const ZMat& V) {
  int n = V.rows();
  ZMat K = nullspace_saturated(V.transpose());
  if (K.cols() == 0) return ZMat::identity(n);
  return nullspace_saturated(K.transpose());
}

mpz_class eig_row_bound(const ZMat& M, const mpz_class& denom) {
  mpz_class best = 0;
  for (int i = 0; i < M.rows(); ++i) {
    mpz_class s = 0;
    for (int j = 0; j < M.cols(); ++j) s += abs(M(i, j));
    if (s > best) best = s;
  }
  mpz_class b;
  mpz_cdiv_q(b.get_mpz_t(), best.get_mpz_t(), denom.get_mpz_t());
  return b;
}

ZPoly charpoly(const ZMat& M, const mpz_class& denom, const mpz_class& eig_bound) {
  int n = M.rows();
  if (n != M.cols()) fail_invalid("charpoly: matrix must be square");
  // |e_k(eigenvalues)| <= C(n,k) B^k <= (1+B)^n
  mpz_class target;
  mpz_class b1 = eig_bound + 1;
  mpz_pow_ui(target.get_mpz_t(), b1.get_mpz_t(), (unsigned long)n);
  target = 2 * target + 1;
  std::vector<mpz_class> resid(n + 1, mpz_class(0));
  mpz_class modulus = 1;
  int pi = 0;
  while (modulus <= target) {
    u64 q = nth_solver_prime(pi++);
    if (denom % (long)q == 0) continue;
    UMat Mq = reduce_mod(M, q);
    if (denom != 1) {
      mpz_class dq = denom % (long)q;
      if (dq < 0) dq += (long)q;
      u64 dinv = invmod_u64(dq.get_ui(), q);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Mq(i, j) = mulmod_u64(Mq(i, j), dinv, q);
    }
    std::vector<u64> cp = charpoly_mod(Mq, q);
    mpz_class qz((unsigned long)q);
    for (int t = 0; t <= n; ++t) {
      mpz_class rv((unsigned long)cp[t]);
      resid[t] = (modulus == 1) ? rv : crt_pair(resid[t], modulus, rv, qz);
    }
    modulus *= qz;
  }
  ZPoly out(n + 1);
  for (int t = 0; t <= n; ++t) out[t] = centered_mod(resid[t], modulus);
  if (out[n] != 1) fail_inconsistent("charpoly: result is not monic");
  // cross-check against one more prime: detects a non-integral true
  // characteristic polynomial, for which the CRT lift above is meaningless
  for (;;) {
    u64 q = nth_solver_prime(pi++);
    if (denom % (long)q == 0) continue;
    UMat Mq = reduce_mod(M, q);
    if (denom != 1) {
      mpz_class dq = denom % (long)q;
      if (dq < 0) dq += (long)q;
      u64 dinv = invmod_u64(dq.get_ui(), q);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Mq(i, j) = mulmod_u64(Mq(i, j), dinv, q);
    }
    std::vector<u64> cp = charpoly_mod(Mq, q);
    for (int t = 0; t <= n; ++t) {
      mpz_class rt = out[t] % (long)q;
      if (rt < 0) rt += (long)q;
      if (rt.get_ui() != cp[t])
        fail_inconsistent("charpoly: scaled matrix has no integer characteristic polynomial");
    }
    return out;
  }
}

}  // namespace omf5
