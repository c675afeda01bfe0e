#include "omf5/neighbours.hpp"

#include <algorithm>
#include <deque>

#include "omf5/linalg.hpp"

namespace omf5 {

namespace {

// Q(v) = v^T H v / 2 with exact integer arithmetic
i64 qvalue(const IMat& h, const IVec& v) {
  i64 s = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) s += h(i, j) * v[(size_t)i] * v[(size_t)j];
  check(s % 2 == 0, "even lattice: v^T H v must be even");
  return s / 2;
}

IVec hvec(const IMat& h, const IVec& v) {
  IVec r(5);
  for (int i = 0; i < 5; ++i) {
    i64 s = 0;
    for (int j = 0; j < 5; ++j) s += h(i, j) * v[(size_t)j];
    r[(size_t)i] = s;
  }
  return r;
}

i64 pair_b(const IMat& h, const IVec& u, const IVec& w) {
  i64 s = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) s += h(i, j) * u[(size_t)i] * w[(size_t)j];
  return s;
}

void require_traversal_prime(const IMat& h, i64 p) {
  if (p < 2 || !is_prime_u64((u64)p)) fail_invalid("neighbour prime must be prime");
  i64 D = half_determinant(h);
  if (D % p == 0) fail_invalid("neighbour prime must not divide the half-determinant");
}

// Build the neighbour lattice from p-divisible generators: p L' is spanned by
// the columns of p*M and the extra vectors; returns the basis C/p with
// |det C| = p^5.
Neighbour assemble_neighbour(const IMat& h, i64 p, const ZMat& M, const std::vector<IVec>& extra) {
  ZMat gens(5, M.cols() + (int)extra.size());
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < M.cols(); ++j) gens(i, j) = p * M(i, j);
  for (size_t e = 0; e < extra.size(); ++e)
    for (int i = 0; i < 5; ++i) gens(i, M.cols() + (int)e) = extra[e][(size_t)i];
  ZMat C = hnf_cols(gens);
  check(C.rows() == 5 && C.cols() == 5, "neighbour basis is not full rank");
  mpz_class dc = det_bareiss(C);
  mpz_class p5 = 1;
  for (int i = 0; i < 5; ++i) p5 *= p;
  check(abs(dc) == p5, "neighbour lattice has wrong index");
  QMat basis(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      mpq_class t(C(i, j), p);
      t.canonicalize();
      basis(i, j) = t;
    }
  // Gram of the neighbour in its own basis
  QMat hq = to_q(to_z(h));
  QMat gram = basis.transpose() * hq * basis;
  IMat hp = to_i(to_z_exact(gram));
  if (!is_integral_hessian(hp)) fail_inconsistent("neighbour Gram is not an integral Hessian");
  check(form_determinant(hp) == form_determinant(h), "neighbour determinant changed");
  IMat u;
  IMat red = reduced_form(hp, &u);
  Neighbour nb;
  nb.hess = red;
  nb.basis = basis * to_q(to_z(u));
  return nb;
}

}  // namespace

std::vector<IVec> isotropic_lines(const IMat& h, i64 p) {
  require_form(h);
  require_traversal_prime(h, p);
  std::vector<IVec> lines;
  IVec v(5);
  // representatives with first nonzero coordinate = 1, lexicographic
  for (int lead = 0; lead < 5; ++lead) {
    int free = 4 - lead;
    i64 total = 1;
    for (int t = 0; t < free; ++t) total *= p;
    for (i64 code = 0; code < total; ++code) {
      for (int t = 0; t < lead; ++t) v[(size_t)t] = 0;
      v[(size_t)lead] = 1;
      i64 c = code;
      for (int t = lead + 1; t < 5; ++t) {
        v[(size_t)t] = c % p;
        c /= p;
      }
      if (qvalue(h, v) % p == 0) lines.push_back(v);
    }
  }
  check((i64)lines.size() == (p + 1) * (p * p + 1), "isotropic line count mismatch");
  // lexicographic by construction within each leading index; sort globally
  std::sort(lines.begin(), lines.end());
  return lines;
}

std::vector<std::array<IVec, 2>> isotropic_planes(const IMat& h, i64 p) {
  require_form(h);
  require_traversal_prime(h, p);
  std::vector<std::array<IVec, 2>> planes;
  // reduced echelon bases with pivots i < j
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) {
      std::vector<int> ufree, wfree;
      for (int k = i + 1; k < 5; ++k)
        if (k != j) ufree.push_back(k);
      for (int k = j + 1; k < 5; ++k) wfree.push_back(k);
      i64 utot = 1, wtot = 1;
      for (size_t t = 0; t < ufree.size(); ++t) utot *= p;
      for (size_t t = 0; t < wfree.size(); ++t) wtot *= p;
      for (i64 uc = 0; uc < utot; ++uc)
        for (i64 wc = 0; wc < wtot; ++wc) {
          IVec u(5, 0), w(5, 0);
          u[(size_t)i] = 1;
          w[(size_t)j] = 1;
          i64 c = uc;
          for (int k : ufree) {
            u[(size_t)k] = c % p;
            c /= p;
          }
          c = wc;
          for (int k : wfree) {
            w[(size_t)k] = c % p;
            c /= p;
          }
          if (qvalue(h, u) % p != 0) continue;
          if (qvalue(h, w) % p != 0) continue;
          if (pair_b(h, u, w) % p != 0) continue;
          planes.push_back({u, w});
        }
    }
  check((i64)planes.size() == (p + 1) * (p * p + 1), "isotropic plane count mismatch");
  return planes;
}

Neighbour p_neighbour(const IMat& h, i64 p, const IVec& line) {
  require_form(h);
  require_traversal_prime(h, p);
  IVec v = line;
  check(qvalue(h, v) % p == 0, "line is not isotropic mod p");
  // improve the lift: Q(v) = 0 mod p^2
  if (qvalue(h, v) % (p * p) != 0) {
    IVec hv = hvec(h, v);
    int m = -1;
    for (int t = 0; t < 5; ++t)
      if (hv[(size_t)t] % p != 0) { m = t; break; }
    check(m >= 0, "isotropic vector lies in the radical mod p");
    u64 up = (u64)p;
    u64 t = mulmod_u64(mod_i64(-(qvalue(h, v) / p), up), invmod_u64(mod_i64(hv[(size_t)m], up), up), up);
    v[(size_t)m] += p * (i64)t;
    check(qvalue(h, v) % (p * p) == 0, "lift failed");
  }
  // sublattice {w : B(v,w) = 0 mod p} plus v/p
  ZMat row(1, 5);
  IVec hv = hvec(h, v);
  for (int j = 0; j < 5; ++j) row(0, j) = hv[(size_t)j];
  ZMat M = lattice_kernel_mod(row, p);
  return assemble_neighbour(h, p, M, {v});
}

std::vector<Neighbour> pp_neighbours(const IMat& h, i64 p, const std::array<IVec, 2>& plane) {
  require_form(h);
  require_traversal_prime(h, p);
  IVec u = plane[0], w = plane[1];
  check(qvalue(h, u) % p == 0 && qvalue(h, w) % p == 0 && pair_b(h, u, w) % p == 0,
        "plane is not totally isotropic mod p");
  u64 up = (u64)p;
  // lift u: Q(u) = 0 mod p^2
  if (qvalue(h, u) % (p * p) != 0) {
    IVec hu = hvec(h, u);
    int m = -1;
    for (int t = 0; t < 5; ++t)
      if (hu[(size_t)t] % p != 0) { m = t; break; }
    check(m >= 0, "degenerate plane lift");
    u64 t = mulmod_u64(mod_i64(-(qvalue(h, u) / p), up), invmod_u64(mod_i64(hu[(size_t)m], up), up), up);
    u[(size_t)m] += p * (i64)t;
  }
  check(qvalue(h, u) % (p * p) == 0, "plane lift failed for u");
  // lift w: solve B(w,y) = -Q(w)/p, B(u,y) = -B(u,w)/p mod p; w += p y
  {
    IVec hu = hvec(h, u), hw = hvec(h, w);
    UMat A(2, 6);
    for (int j = 0; j < 5; ++j) {
      A(0, j) = mod_i64(hw[(size_t)j], up);
      A(1, j) = mod_i64(hu[(size_t)j], up);
    }
    A(0, 5) = mod_i64(-(qvalue(h, w) / p), up);
    A(1, 5) = mod_i64(-(pair_b(h, u, w) / p), up);
    auto piv = rref_mod(A, up);
    check(piv.size() == 2 && piv[0] < 5 && piv[1] < 5, "plane lift system is singular");
    IVec y(5, 0);
    for (size_t r = 0; r < piv.size(); ++r) y[(size_t)piv[r]] = (i64)A((int)r, 5);
    for (int t = 0; t < 5; ++t) w[(size_t)t] += p * y[(size_t)t];
  }
  check(qvalue(h, w) % (p * p) == 0, "plane lift failed for w (norm)");
  check(pair_b(h, u, w) % (p * p) == 0, "plane lift failed for w (pairing)");
  IVec hu = hvec(h, u), hw = hvec(h, w);
  ZMat rows(2, 5);
  for (int j = 0; j < 5; ++j) {
    rows(0, j) = hu[(size_t)j];
    rows(1, j) = hw[(size_t)j];
  }
  ZMat M = lattice_kernel_mod(rows, p);
  // The valid lifts of this plane fall into p classes giving p distinct
  // neighbours: (u,w) -> (u + pt*za, w + pt*zb) with B(u,za) = 0,
  // B(w,za) = 1, B(u,zb) = -1, B(w,zb) = 0 mod p keeps Q(u), Q(w) and
  // B(u,w) divisible by p^2 while moving u/p off the previous lattice.
  IVec za(5, 0), zb(5, 0);
  {
    UMat A(2, 7);
    for (int j = 0; j < 5; ++j) {
      A(0, j) = mod_i64(hu[(size_t)j], up);
      A(1, j) = mod_i64(hw[(size_t)j], up);
    }
    A(0, 5) = 0;
    A(1, 5) = 1;
    A(0, 6) = up - 1;
    A(1, 6) = 0;
    auto piv = rref_mod(A, up);
    check(piv.size() == 2 && piv[0] < 5 && piv[1] < 5, "lift shift system is singular");
    for (size_t r = 0; r < piv.size(); ++r) {
      za[(size_t)piv[r]] = (i64)A((int)r, 5);
      zb[(size_t)piv[r]] = (i64)A((int)r, 6);
    }
    check(mod_i64(pair_b(h, u, za), up) == 0 && mod_i64(pair_b(h, w, za), up) == 1 &&
              mod_i64(pair_b(h, u, zb), up) == up - 1 && mod_i64(pair_b(h, w, zb), up) == 0,
          "lift shift solve failed");
  }
  std::vector<Neighbour> out;
  std::vector<ZMat> seen;  // canonical bases of p*L', to rule out collisions
  for (i64 t = 0; t < p; ++t) {
    IVec ut = u, wt = w;
    for (int j = 0; j < 5; ++j) {
      ut[(size_t)j] += p * t * za[(size_t)j];
      wt[(size_t)j] += p * t * zb[(size_t)j];
    }
    check(qvalue(h, ut) % (p * p) == 0 && qvalue(h, wt) % (p * p) == 0 &&
              pair_b(h, ut, wt) % (p * p) == 0,
          "shifted lift broke the plane conditions");
    ZMat gens(5, M.cols() + 2);
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < M.cols(); ++j) gens(i, j) = p * M(i, j);
      gens(i, M.cols()) = ut[(size_t)i];
      gens(i, M.cols() + 1) = wt[(size_t)i];
    }
    ZMat canon = hnf_cols(gens);
    for (const ZMat& s : seen) check(!(s == canon), "shifted lifts gave the same neighbour");
    seen.push_back(canon);
    out.push_back(assemble_neighbour(h, p, M, {ut, wt}));
  }
  return out;
}

std::vector<i64> theta_prefix(const IMat& h) { return theta_series(h, 8); }

int identify_class(const Genus& g, const IMat& hess, const std::vector<i64>& theta, IMat* iso) {
  for (size_t i = 0; i < g.classes.size(); ++i) {
    const GenusClass& c = g.classes[i];
    if (c.theta != theta) continue;
    if (c.hess == hess) {
      if (iso) *iso = IMat::identity(5);
      return (int)i;
    }
    auto m = isometry_map(c.hess, hess);
    if (m) {
      if (iso) *iso = *m;
      return (int)i;
    }
  }
  return -1;
}

Genus enumerate_genus(const IMat& seed, i64 p) {
  require_form(seed);
  require_traversal_prime(seed, p);
  i64 D = half_determinant(seed);
  if (D % 2 == 0) fail_invalid("even discriminants are not supported");
  GenusSym sym{1, 1};
  for (i64 q : prime_factors(D)) {
    if (hasse_witt(seed, q) == -1) {
      if (valuation(D, q) != 1) fail_invalid("negative part of the discriminant must be squarefree");
      sym.d_minus *= q;
    }
  }
  sym.d_plus = D / sym.d_minus;
  validate_genus_symbol(sym);
  std::string why;
  if (!matches_genus_symbol(seed, sym, &why)) fail_invalid("seed fails its own genus invariants: " + why);

  Genus g;
  g.seed = seed;
  g.sym = sym;
  g.traversal_prime = p;

  auto register_class = [&](const IMat& hess, const QMat& from_seed) {
    GenusClass c;
    c.hess = hess;
    c.from_seed = from_seed;
    c.theta = theta_prefix(hess);
    c.aut = automorphism_group(hess);
    if (!matches_genus_symbol(hess, sym, &why))
      fail_inconsistent("neighbour left the genus: " + why);
    // from_seed really transports seed to the class representative
    QMat hq = to_q(to_z(seed));
    QMat gram = c.from_seed.transpose() * hq * c.from_seed;
    check(to_z_exact(gram) == to_z(hess), "from_seed transport mismatch");
    g.classes.push_back(std::move(c));
  };

  IMat u0;
  IMat r0 = reduced_form(seed, &u0);
  register_class(r0, to_q(to_z(u0)));

  std::deque<size_t> todo{0};
  while (!todo.empty()) {
    size_t i = todo.front();
    todo.pop_front();
    IMat hi = g.classes[i].hess;          // copy: classes vector may grow
    QMat fi = g.classes[i].from_seed;
    for (const IVec& line : isotropic_lines(hi, p)) {
      Neighbour nb = p_neighbour(hi, p, line);
      std::vector<i64> th = theta_prefix(nb.hess);
      int j = identify_class(g, nb.hess, th, nullptr);
      if (j < 0) {
        register_class(nb.hess, fi * nb.basis);
        todo.push_back(g.classes.size() - 1);
      }
    }
  }
  g.mass = 0;
  for (const GenusClass& c : g.classes) g.mass += mpq_class(1, c.aut.order);
  return g;
}

}  // namespace omf5
