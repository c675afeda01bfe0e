#include "omf5/hecke.hpp"

#include <atomic>
#include <map>
#include <mutex>
#include <thread>

#include "omf5/linalg.hpp"

namespace omf5 {

namespace {

mpq_class det_q(QMat A) {
  check(A.rows() == A.cols(), "det_q: square matrix expected");
  int n = A.rows();
  mpq_class det = 1;
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int i = c; i < n; ++i)
      if (A(i, c) != 0) { piv = i; break; }
    if (piv < 0) return 0;
    if (piv != c) {
      for (int j = c; j < n; ++j) std::swap(A(c, j), A(piv, j));
      det = -det;
    }
    det *= A(c, c);
    for (int i = c + 1; i < n; ++i) {
      if (A(i, c) == 0) continue;
      mpq_class f = A(i, c) / A(c, c);
      for (int j = c; j < n; ++j) A(i, j) -= f * A(c, j);
    }
  }
  return det;
}

// residue of a rational mod q (denominator must be a unit)
u64 residue_mod(const mpq_class& x, i64 q) {
  u64 den = mpz_fdiv_ui(x.get_den().get_mpz_t(), (u64)q);
  if (den == 0 || gcd_i64((i64)den, q) != 1)
    fail_inconsistent("theta sign: denominator not invertible mod q");
  u64 num = mpz_fdiv_ui(x.get_num().get_mpz_t(), (u64)q);
  return mulmod_u64(num, invmod_u64(den, (u64)q), (u64)q);
}

int match_sign(const std::vector<u64>& w, const IVec& v_dst, i64 q) {
  u64 uq = (u64)q;
  int sign = 0;
  for (size_t k = 0; k < w.size(); ++k) {
    u64 vk = mod_i64(v_dst[k], q);
    if (vk == 0) continue;
    u64 s = mulmod_u64(w[k], invmod_u64(vk, uq), uq);
    if (s == 1) sign = 1;
    else if (s == uq - 1) sign = -1;
    else fail_inconsistent("theta sign: radical multiplier is not +-1");
    break;
  }
  check(sign != 0, "theta sign: destination generator vanishes mod q");
  for (size_t k = 0; k < w.size(); ++k) {
    u64 vk = mod_i64(v_dst[k], q);
    u64 expect = sign == 1 ? vk : (vk == 0 ? 0 : uq - vk);
    if (w[k] != expect) fail_inconsistent("theta sign: image is not a radical multiple");
  }
  return sign;
}

int theta_product(const QMat& phi, const std::vector<RadicalRef>& radicals, int src, int dst) {
  int t = 1;
  for (const auto& rad : radicals)
    t *= theta_sign(phi, rad.gens[(size_t)src], rad.gens[(size_t)dst], rad.q);
  return t;
}

// pivot rows of an integer column basis, chosen mod a solver prime
std::vector<int> basis_pivot_rows(const ZMat& B) {
  for (int attempt = 0; attempt < 8; ++attempt) {
    u64 q = nth_solver_prime(attempt);
    UMat A(B.cols(), B.rows());
    for (int i = 0; i < B.rows(); ++i)
      for (int j = 0; j < B.cols(); ++j) A(j, i) = mpz_fdiv_ui(B(i, j).get_mpz_t(), q);
    auto piv = rref_mod(A, q);
    if ((int)piv.size() == B.cols()) return piv;
  }
  fail_inconsistent("basis has deficient column rank");
}

QMat left_inverse_of(const ZMat& B) {
  auto piv = basis_pivot_rows(B);
  int m = B.cols(), n = B.rows();
  QMat M(m, m);
  for (int r = 0; r < m; ++r)
    for (int j = 0; j < m; ++j) M(r, j) = mpq_class(B(piv[(size_t)r], j));
  QMat Minv = inverse_q(M);
  QMat L(m, n);
  for (int r = 0; r < m; ++r)
    for (int k = 0; k < m; ++k) L(r, piv[(size_t)k]) = Minv(r, k);
  // exact: L * B = I
  for (int r = 0; r < m; ++r)
    for (int j = 0; j < m; ++j) {
      mpq_class s = 0;
      for (int k = 0; k < n; ++k)
        if (B(k, j) != 0) s += L(r, k) * mpq_class(B(k, j));
      check(s == (r == j ? 1 : 0), "left inverse is wrong");
    }
  return L;
}

}  // namespace

int theta_sign(const QMat& phi, const IVec& v_src, const IVec& v_dst, i64 q) {
  check(phi.rows() == 5 && phi.cols() == 5 && v_src.size() == 5 && v_dst.size() == 5,
        "theta sign: dimension mismatch");
  std::vector<u64> w(5);
  for (int k = 0; k < 5; ++k) {
    mpq_class s = 0;
    for (int l = 0; l < 5; ++l)
      if (phi(k, l) != 0 && v_src[(size_t)l] != 0) s += phi(k, l) * v_src[(size_t)l];
    w[(size_t)k] = s == 0 ? 0 : residue_mod(s, q);
  }
  return match_sign(w, v_dst, q);
}

int theta_sign(const IMat& g, const IVec& v0, i64 q) {
  check(g.rows() == 5 && g.cols() == 5 && v0.size() == 5, "theta sign: dimension mismatch");
  std::vector<u64> w(5);
  for (int k = 0; k < 5; ++k) {
    i64 s = 0;
    for (int l = 0; l < 5; ++l) s = (s + mod_i64(g(k, l) * v0[(size_t)l], q)) % q;
    w[(size_t)k] = (u64)s;
  }
  return match_sign(w, v0, q);
}

ZMat character_subspace(const WeightRep& w, const GenusClass& cls, const std::vector<IVec>& rad_gens, i64 d) {
  auto primes = prime_factors(d);
  check(primes.size() == rad_gens.size(), "character subspace: one radical generator per prime");
  QMat cinv = inverse_q(cls.from_seed);
  int n = (int)w.dim;
  QMat P(n, n);
  i64 used = 0;
  for (const auto& g : cls.aut.elements) {
    if (det5(g) != 1) continue;
    int theta = 1;
    for (size_t k = 0; k < primes.size(); ++k) theta *= theta_sign(g, rad_gens[k], primes[k]);
    QMat tau = cls.from_seed * to_q(g) * cinv;
    QMat R = weight_action(w, tau);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) P(i, j) += theta > 0 ? R(i, j) : -R(i, j);
    ++used;
  }
  check(used == cls.aut.proper_order, "character subspace: proper order mismatch");
  mpq_class scale(1, (unsigned long)used);
  scale.canonicalize();
  mpq_class tr = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      P(i, j) *= scale;
      if (i == j) tr += P(i, j);
    }
  check(tr.get_den() == 1 && tr >= 0, "character projector trace must be a nonnegative integer");
  int m = (int)tr.get_num().get_si();
  if (m == 0) return ZMat(n, 0);
  // saturated integer basis of the image from m independent projector columns
  mpz_class den = 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) den = lcm(den, P(i, j).get_den());
  ZMat Pz(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      mpq_class v = P(i, j) * den;
      Pz(i, j) = v.get_num();
    }
  std::vector<int> cols;
  for (int attempt = 0; attempt < 8 && cols.empty(); ++attempt) {
    u64 q = nth_solver_prime(attempt);
    UMat R = reduce_mod(Pz, q);
    auto piv = rref_mod(R, q);
    if ((int)piv.size() == m) cols = piv;
  }
  check(!cols.empty(), "character projector rank disagrees with its trace");
  ZMat C(n, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) C(i, j) = Pz(i, cols[(size_t)j]);
  ZMat B = saturate_columns(C);
  check(B.cols() == m, "saturation changed the block dimension");
  // every basis column is fixed by the projector
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) {
      mpq_class s = 0;
      for (int k = 0; k < n; ++k)
        if (B(k, j) != 0) s += P(i, k) * mpq_class(B(k, j));
      check(s == B(i, j), "character basis is not projector-fixed");
    }
  return B;
}

OMFSpace build_space(const Genus& genus, int a, int b, i64 d) {
  OMFSpace sp;
  sp.genus = &genus;
  sp.a = a;
  sp.b = b;
  i64 D = half_determinant(genus.seed);
  if (d <= 0 || D % d != 0 || gcd_i64(d, D / d) != 1)
    fail_invalid("theta character index must be a unitary divisor of the half determinant");
  if (!is_squarefree_i64(d)) fail_invalid("theta character index must be squarefree");
  sp.d = d;
  sp.weight = build_weight(a, b, genus.seed);
  for (i64 q : prime_factors(d)) {
    RadicalRef rad;
    rad.q = q;
    for (const auto& cls : genus.classes) rad.gens.push_back(radical_generator(cls.hess, q));
    sp.radicals.push_back(std::move(rad));
  }
  for (size_t i = 0; i < genus.classes.size(); ++i) {
    std::vector<IVec> gens;
    for (const auto& rad : sp.radicals) gens.push_back(rad.gens[i]);
    SpaceBlock blk;
    blk.class_index = (int)i;
    blk.basis = character_subspace(sp.weight, genus.classes[i], gens, d);
    blk.dim = blk.basis.cols();
    if (blk.dim > 0) blk.left_inverse = left_inverse_of(blk.basis);
    sp.dim += blk.dim;
    sp.blocks.push_back(std::move(blk));
  }
  return sp;
}

HeckeOperator hecke_matrix(const OMFSpace& space, i64 p, int kind, int threads) {
  check(space.genus != nullptr, "hecke: empty space");
  const Genus& genus = *space.genus;
  if (kind != 1 && kind != 2) fail_invalid("hecke: kind must be 1 (T(p)) or 2 (T1(p^2))");
  int nc = (int)genus.classes.size();
  std::vector<int> offset((size_t)nc + 1, 0);
  for (int i = 0; i < nc; ++i) offset[(size_t)i + 1] = offset[(size_t)i] + (int)space.blocks[(size_t)i].dim;
  int N = offset[(size_t)nc];
  check(N == (int)space.dim, "hecke: block dimensions disagree with the space");

  // cached per-class transport data
  std::vector<QMat> cinv((size_t)nc);
  std::vector<int> cdet((size_t)nc);
  for (int i = 0; i < nc; ++i) {
    const QMat& C = genus.classes[(size_t)i].from_seed;
    cinv[(size_t)i] = inverse_q(C);
    mpq_class dc = det_q(C);
    check(dc == 1 || dc == -1, "hecke: class transport is not unimodular");
    cdet[(size_t)i] = dc == 1 ? 1 : -1;
  }

  i64 expected = (p + 1) * (p * p + 1);  // lines and planes alike
  if (kind == 2) expected *= p;          // each plane carries p neighbours
  QMat result(N, N);
  std::vector<int> order;
  for (int i = 0; i < nc; ++i)
    if (space.blocks[(size_t)i].dim > 0) order.push_back(i);

  std::vector<std::map<int, QMat>> row_acc((size_t)nc);
  auto process_class = [&](int i) {
    const IMat& hi = genus.classes[(size_t)i].hess;
    std::map<int, QMat> acc;  // j -> sum of theta * rho(tau)
    i64 count = 0;
    auto handle = [&](const Neighbour& nb) {
      ++count;
      IMat iso;
      int j = identify_class(genus, nb.hess, theta_prefix(nb.hess), &iso);
      check(j >= 0, "hecke: neighbour leaves the genus");
      if (space.blocks[(size_t)j].dim == 0) return;
      QMat phi = nb.basis * inverse_q(to_q(iso));
      mpq_class dphi = det_q(phi);
      check(dphi == 1 || dphi == -1, "hecke: transporter is not unimodular");
      int dtau = (dphi == 1 ? 1 : -1) * cdet[(size_t)i] * cdet[(size_t)j];
      if (dtau < 0)
        for (int r = 0; r < 5; ++r)
          for (int c = 0; c < 5; ++c) phi(r, c) = -phi(r, c);
      int theta = 1;
      for (const auto& rad : space.radicals)
        theta *= theta_sign(phi, rad.gens[(size_t)j], rad.gens[(size_t)i], rad.q);
      QMat tau = genus.classes[(size_t)i].from_seed * phi * cinv[(size_t)j];
      QMat R = weight_action(space.weight, tau);
      auto it = acc.find(j);
      if (it == acc.end()) it = acc.emplace(j, QMat((int)space.weight.dim, (int)space.weight.dim)).first;
      for (int r = 0; r < R.rows(); ++r)
        for (int c = 0; c < R.cols(); ++c)
          if (theta > 0) it->second(r, c) += R(r, c);
          else it->second(r, c) -= R(r, c);
    };
    if (kind == 1) {
      for (const auto& line : isotropic_lines(hi, p)) handle(p_neighbour(hi, p, line));
    } else {
      for (const auto& plane : isotropic_planes(hi, p))
        for (const Neighbour& nb : pp_neighbours(hi, p, plane)) handle(nb);
    }
    check(count == expected, "hecke: neighbour count mismatch");
    row_acc[(size_t)i] = std::move(acc);
  };

  if (threads <= 1 || order.size() <= 1) {
    for (int i : order) process_class(i);
  } else {
    std::atomic<size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto worker = [&]() {
      for (;;) {
        size_t k = next.fetch_add(1);
        if (k >= order.size()) break;
        try {
          process_class(order[k]);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mu);
          if (!err) err = std::current_exception();
          next.store(order.size());
          break;
        }
      }
    };
    std::vector<std::thread> pool;
    int nt = std::min<int>(threads, (int)order.size());
    for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
  }

  for (int i : order) {
    const SpaceBlock& bi = space.blocks[(size_t)i];
    for (auto& [j, A] : row_acc[(size_t)i]) {
      const SpaceBlock& bj = space.blocks[(size_t)j];
      // ambient image A * B_j, then coordinates through the left inverse
      QMat AB(A.rows(), (int)bj.dim);
      for (int r = 0; r < A.rows(); ++r)
        for (int c = 0; c < (int)bj.dim; ++c) {
          mpq_class s = 0;
          for (int k = 0; k < A.cols(); ++k)
            if (bj.basis(k, c) != 0) s += A(r, k) * mpq_class(bj.basis(k, c));
          AB(r, c) = s;
        }
      QMat coords = bi.left_inverse * AB;
      // the image must lie in the block's span exactly
      for (int r = 0; r < AB.rows(); ++r)
        for (int c = 0; c < AB.cols(); ++c) {
          mpq_class s = 0;
          for (int k = 0; k < (int)bi.dim; ++k)
            if (bi.basis(r, k) != 0) s += mpq_class(bi.basis(r, k)) * coords(k, c);
          check(s == AB(r, c), "hecke: image leaves the character component");
        }
      for (int r = 0; r < coords.rows(); ++r)
        for (int c = 0; c < coords.cols(); ++c)
          result(offset[(size_t)i] + r, offset[(size_t)j] + c) = coords(r, c);
    }
  }

  // integral normalization p^<lambda,mu>: the highest weight is
  // ((a+b)/2, (a-b)/2) and the double cosets pair with (1,0) and (1,1),
  // so T(p) carries p^{(a+b)/2} and T1(p^2) carries p^a; this makes the
  // eigenvalues algebraic integers and leaves the trivial weight alone
  int expo = kind == 1 ? (space.a + space.b) / 2 : space.a;
  mpz_class scale = 1;
  for (int t = 0; t < expo; ++t) scale *= p;
  if (scale != 1)
    for (int r = 0; r < N; ++r)
      for (int c = 0; c < N; ++c) result(r, c) *= scale;

  HeckeOperator op;
  op.p = p;
  op.kind = kind;
  mpz_class den = 1;
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c) den = lcm(den, result(r, c).get_den());
  op.denom = den;
  op.mat = ZMat(N, N);
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c) {
      mpq_class v = result(r, c) * den;
      check(v.get_den() == 1, "hecke: denominator clearing failed");
      op.mat(r, c) = v.get_num();
    }
  return op;
}

}  // namespace omf5
