// Dense row-major matrices over arbitrary coefficient rings.  Vectors of a
// lattice are COLUMN vectors throughout the library; a basis matrix holds
// basis vectors as columns.
#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "omf5/intmath.hpp"

namespace omf5 {

template <class T>
class Mat {
 public:
  Mat() : r_(0), c_(0) {}
  Mat(int r, int c) : r_(r), c_(c), a_((size_t)r * c) {}
  Mat(int r, int c, std::initializer_list<T> xs) : r_(r), c_(c), a_(xs) {
    if ((int)a_.size() != r * c) fail_invalid("matrix literal has wrong size");
  }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  int rows() const { return r_; }
  int cols() const { return c_; }
  T& operator()(int i, int j) { return a_[(size_t)i * c_ + j]; }
  const T& operator()(int i, int j) const { return a_[(size_t)i * c_ + j]; }

  bool operator==(const Mat& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }
  bool operator!=(const Mat& o) const { return !(*this == o); }

  Mat transpose() const {
    Mat t(c_, r_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Mat operator*(const Mat& o) const {
    if (c_ != o.r_) fail_invalid("matrix product shape mismatch");
    Mat p(r_, o.c_);
    for (int i = 0; i < r_; ++i)
      for (int k = 0; k < c_; ++k) {
        const T& x = (*this)(i, k);
        if (x == T(0)) continue;
        for (int j = 0; j < o.c_; ++j) p(i, j) += x * o(k, j);
      }
    return p;
  }

  Mat operator+(const Mat& o) const {
    Mat s(r_, c_);
    for (size_t i = 0; i < a_.size(); ++i) s.a_[i] = a_[i] + o.a_[i];
    return s;
  }

  Mat operator-(const Mat& o) const {
    Mat s(r_, c_);
    for (size_t i = 0; i < a_.size(); ++i) s.a_[i] = a_[i] - o.a_[i];
    return s;
  }

  Mat operator-() const {
    Mat s(r_, c_);
    for (size_t i = 0; i < a_.size(); ++i) s.a_[i] = -a_[i];
    return s;
  }

  std::vector<T> operator*(const std::vector<T>& v) const {
    if ((int)v.size() != c_) fail_invalid("matrix-vector shape mismatch");
    std::vector<T> w(r_, T(0));
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) w[i] += (*this)(i, j) * v[j];
    return w;
  }

  std::vector<T> col(int j) const {
    std::vector<T> v(r_);
    for (int i = 0; i < r_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  std::vector<T> row(int i) const {
    std::vector<T> v(c_);
    for (int j = 0; j < c_; ++j) v[j] = (*this)(i, j);
    return v;
  }

  void set_col(int j, const std::vector<T>& v) {
    for (int i = 0; i < r_; ++i) (*this)(i, j) = v[i];
  }

 private:
  int r_, c_;
  std::vector<T> a_;
};

using IMat = Mat<i64>;
using ZMat = Mat<mpz_class>;
using QMat = Mat<mpq_class>;
using UMat = Mat<u64>;

using IVec = std::vector<i64>;
using ZVec = std::vector<mpz_class>;
using QVec = std::vector<mpq_class>;

inline ZMat to_z(const IMat& m) {
  ZMat z(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) z(i, j) = m(i, j);
  return z;
}

inline QMat to_q(const ZMat& m) {
  QMat q(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) q(i, j) = mpq_class(m(i, j));
  return q;
}

inline QMat to_q(const IMat& m) { return to_q(to_z(m)); }

// Exact conversions back down; raise on overflow / non-integrality.
inline IMat to_i(const ZMat& m) {
  IMat r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      if (!m(i, j).fits_slong_p()) fail_inconsistent("matrix entry exceeds machine word");
      r(i, j) = m(i, j).get_si();
    }
  return r;
}

inline ZMat to_z_exact(const QMat& m) {
  ZMat r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      if (m(i, j).get_den() != 1) fail_inconsistent("matrix entry is not an integer");
      r(i, j) = m(i, j).get_num();
    }
  return r;
}

inline ZVec to_z(const IVec& v) {
  ZVec z(v.size());
  for (size_t i = 0; i < v.size(); ++i) z[i] = v[i];
  return z;
}

inline UMat reduce_mod(const ZMat& m, u64 p) {
  UMat r(m.rows(), m.cols());
  mpz_class t;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      t = m(i, j) % (long)p;
      if (t < 0) t += (long)p;
      r(i, j) = t.get_ui();
    }
  return r;
}

}  // namespace omf5
