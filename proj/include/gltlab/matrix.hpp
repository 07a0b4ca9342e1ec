#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <utility>

#include "gltlab/common.hpp"

namespace gltlab {

// Dense complex matrix, row-major. The universal carrier for every builder,
// mean and spectral routine in this library; sizes stay at desk scale so no
// attempt is made at sparse storage.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(size_t(rows) * cols) {}

  static Matrix identity(int n) {
    Matrix I(n, n);
    for (int i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
  }
  static Matrix zero(int rows, int cols) { return Matrix(rows, cols); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  cdouble& operator()(int i, int j) { return data_[size_t(i) * cols_ + j]; }
  const cdouble& operator()(int i, int j) const { return data_[size_t(i) * cols_ + j]; }

  cdouble* data() { return data_.data(); }
  const cdouble* data() const { return data_.data(); }

  Matrix& operator+=(const Matrix& o) {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Matrix& operator*=(cdouble s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, cdouble s) { return a *= s; }
  friend Matrix operator*(cdouble s, Matrix a) { return a *= s; }

  Matrix adjoint() const {
    Matrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
  }
  Matrix transpose() const {
    Matrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  // (A + A*)/2; cheap way to keep results of symmetric algorithms exactly Hermitian.
  Matrix hermitized() const {
    Matrix r(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
    return r;
  }

  cdouble trace() const {
    cdouble t = 0.0;
    for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
  }

  double max_imag_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v.imag()));
    return m;
  }

  bool is_real(double eps = 0.0) const { return max_imag_abs() <= eps; }

  // max_{i,j} |a_ij - conj(a_ji)| <= eps * (1 + max|a_ij|)
  bool is_hermitian(double eps = tol::hermitian_check) const {
    if (rows_ != cols_) return false;
    double dev = 0.0;
    for (int i = 0; i < rows_; ++i)
      for (int j = i; j < cols_; ++j)
        dev = std::max(dev, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return dev <= eps * (1.0 + max_abs());
  }

  std::vector<cdouble> matvec(const std::vector<cdouble>& x) const {
    assert(int(x.size()) == cols_);
    std::vector<cdouble> y(rows_, 0.0);
    for (int i = 0; i < rows_; ++i) {
      cdouble acc = 0.0;
      const cdouble* row = data_.data() + size_t(i) * cols_;
      for (int j = 0; j < cols_; ++j) acc += row[j] * x[j];
      y[i] = acc;
    }
    return y;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<cdouble> data_;
};

namespace detail {

// C += sign * A * B on real planes, ikj order so the j loop vectorizes.
inline void gemm_accum(const std::vector<double>& A, const std::vector<double>& B,
                       std::vector<double>& C, int m, int k, int n, double sign) {
  for (int i = 0; i < m; ++i) {
    const double* arow = A.data() + size_t(i) * k;
    double* crow = C.data() + size_t(i) * n;
    for (int l = 0; l < k; ++l) {
      const double a = sign * arow[l];
      if (a == 0.0) continue;
      const double* brow = B.data() + size_t(l) * n;
      for (int j = 0; j < n; ++j) crow[j] += a * brow[j];
    }
  }
}

struct Planes {
  std::vector<double> re, im;
  bool has_im = false;
};

inline Planes split(const Matrix& M) {
  Planes p;
  const size_t sz = size_t(M.rows()) * M.cols();
  p.re.resize(sz);
  p.im.resize(sz);
  const cdouble* d = M.data();
  for (size_t i = 0; i < sz; ++i) {
    p.re[i] = d[i].real();
    p.im[i] = d[i].imag();
    if (d[i].imag() != 0.0) p.has_im = true;
  }
  return p;
}

}  // namespace detail

// Complex product via four real products; skips the imaginary planes when the
// inputs are real, which is the common case for the matrices in this project.
inline Matrix operator*(const Matrix& A, const Matrix& B) {
  assert(A.cols() == B.rows());
  const int m = A.rows(), k = A.cols(), n = B.cols();
  detail::Planes a = detail::split(A), b = detail::split(B);
  std::vector<double> cre(size_t(m) * n, 0.0), cim;
  detail::gemm_accum(a.re, b.re, cre, m, k, n, 1.0);
  if (a.has_im && b.has_im) detail::gemm_accum(a.im, b.im, cre, m, k, n, -1.0);
  if (a.has_im || b.has_im) {
    cim.assign(size_t(m) * n, 0.0);
    if (a.has_im) detail::gemm_accum(a.im, b.re, cim, m, k, n, 1.0);
    if (b.has_im) detail::gemm_accum(a.re, b.im, cim, m, k, n, 1.0);
  }
  Matrix C(m, n);
  cdouble* cd = C.data();
  if (cim.empty()) {
    for (size_t i = 0; i < cre.size(); ++i) cd[i] = cre[i];
  } else {
    for (size_t i = 0; i < cre.size(); ++i) cd[i] = cdouble(cre[i], cim[i]);
  }
  return C;
}

// Kronecker (tensor) product.
inline Matrix kron(const Matrix& A, const Matrix& B) {
  Matrix K(A.rows() * B.rows(), A.cols() * B.cols());
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j) {
      const cdouble a = A(i, j);
      if (a == 0.0) continue;
      for (int p = 0; p < B.rows(); ++p)
        for (int q = 0; q < B.cols(); ++q) K(i * B.rows() + p, j * B.cols() + q) = a * B(p, q);
    }
  return K;
}

inline Matrix diag(const std::vector<double>& d) {
  Matrix D(int(d.size()), int(d.size()));
  for (int i = 0; i < int(d.size()); ++i) D(i, i) = d[i];
  return D;
}

inline Matrix diag(const std::vector<cdouble>& d) {
  Matrix D(int(d.size()), int(d.size()));
  for (int i = 0; i < int(d.size()); ++i) D(i, i) = d[i];
  return D;
}

}  // namespace gltlab
