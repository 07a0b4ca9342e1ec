#pragma once

#include <functional>
#include <iostream>
#include <numeric>

#include "gltlab/fft.hpp"
#include "gltlab/trig_polynomial.hpp"

namespace gltlab {

// Multi-index n = (n_1, ..., n_d) of positive integers.
struct MultiIndex {
  std::vector<int> comps;

  MultiIndex() = default;
  MultiIndex(std::initializer_list<int> c) : comps(c) { validate(); }
  explicit MultiIndex(std::vector<int> c) : comps(std::move(c)) { validate(); }

  void validate() const {
    if (comps.empty()) throw InvalidParameterError("MultiIndex: empty");
    for (int v : comps)
      if (v <= 0) throw InvalidParameterError("MultiIndex: components must be positive");
  }

  int levels() const { return int(comps.size()); }
  long total() const {
    return std::accumulate(comps.begin(), comps.end(), 1L, std::multiplies<long>());
  }
};

// Lexicographic enumeration of 0-based offsets below n; returns false after the last.
inline bool next_offset(std::vector<int>& idx, const MultiIndex& n) {
  for (int i = n.levels() - 1; i >= 0; --i) {
    if (++idx[i] < n.comps[i]) return true;
    idx[i] = 0;
  }
  return false;
}

inline long flatten_offset(const std::vector<int>& idx, const MultiIndex& n) {
  long f = 0;
  for (int i = 0; i < n.levels(); ++i) f = f * n.comps[i] + idx[i];
  return f;
}

// a(x) sampled on [0,1]^d, r x r valued.
struct SamplingFn {
  int d = 1, r = 1;
  std::function<Matrix(const std::vector<double>&)> eval;

  static SamplingFn scalar(std::function<double(double)> f) {
    SamplingFn s;
    s.eval = [f = std::move(f)](const std::vector<double>& x) {
      Matrix M(1, 1);
      M(0, 0) = f(x[0]);
      return M;
    };
    return s;
  }
  static SamplingFn scalar2(std::function<double(double, double)> f) {
    SamplingFn s;
    s.d = 2;
    s.eval = [f = std::move(f)](const std::vector<double>& x) {
      Matrix M(1, 1);
      M(0, 0) = f(x[0], x[1]);
      return M;
    };
    return s;
  }
};

// J_n^{(k)}: ones exactly where i - j = k. |k| >= n gives the zero matrix.
inline Matrix shift_matrix(int n, int k) {
  Matrix J(n, n);
  for (int i = 0; i < n; ++i) {
    const int j = i - k;
    if (0 <= j && j < n) J(i, j) = 1.0;
  }
  return J;
}

// Multilevel block Toeplitz matrix of order N(n)*r from the generating
// function p: sum_k J^{(k_1)} x ... x J^{(k_d)} x F_k. Space-major layout:
// spatial multi-index outer, r x r block inner. Coefficients with any
// |k_i| >= n_i cannot appear in the matrix and are skipped (with a warning).
inline Matrix toeplitz(const MultiIndex& n, const TrigPolynomial& p) {
  if (n.levels() != p.levels())
    throw InvalidParameterError("toeplitz: multi-index level count != polynomial d");
  const int r = p.block_order();
  const long N = n.total();
  Matrix T(int(N) * r, int(N) * r);
  bool warned = false;

  for (const auto& [k, F] : p.coefficients()) {
    bool in_range = true;
    for (int i = 0; i < n.levels(); ++i)
      if (std::abs(k[i]) >= n.comps[i]) in_range = false;
    if (!in_range) {
      if (!warned)
        std::cerr << "toeplitz: coefficient outside (-n, n) ignored\n";
      warned = true;
      continue;
    }
    std::vector<int> i_idx(n.levels(), 0);
    do {
      std::vector<int> j_idx(n.levels());
      bool ok = true;
      for (int l = 0; l < n.levels(); ++l) {
        j_idx[l] = i_idx[l] - k[l];
        if (j_idx[l] < 0 || j_idx[l] >= n.comps[l]) ok = false;
      }
      if (!ok) continue;
      const long bi = flatten_offset(i_idx, n) * r;
      const long bj = flatten_offset(j_idx, n) * r;
      for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) T(int(bi + a), int(bj + b)) += F(a, b);
    } while (next_offset(i_idx, n));
  }
  return T;
}

inline Matrix toeplitz(int n, const TrigPolynomial& p) { return toeplitz(MultiIndex{n}, p); }

// Circulant with first column a: entries a_{(i-j) mod n}.
inline Matrix circulant(int n, const std::vector<cdouble>& first_column) {
  if (int(first_column.size()) != n)
    throw InvalidParameterError("circulant: first column length != n");
  Matrix C(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) C(i, j) = first_column[((i - j) % n + n) % n];
  return C;
}

// lambda_j = sum_k a_k e^{i k 2 pi j / n}; the DFT of the first column with
// positive twiddle sign.
inline std::vector<cdouble> circulant_eigenvalues(const std::vector<cdouble>& first_column) {
  return dft(first_column, +1);
}

// y = C x via FFT diagonalization for power-of-two orders, dense product
// otherwise.
inline std::vector<cdouble> circulant_matvec(const std::vector<cdouble>& first_column,
                                             const std::vector<cdouble>& x) {
  const size_t n = first_column.size();
  if (x.size() != n) throw InvalidParameterError("circulant_matvec: size mismatch");
  if (!is_power_of_two(n)) return circulant(int(n), first_column).matvec(x);
  // C = F diag(lam) F* with F_{jk} = e^{-2 pi i jk/n}/sqrt(n), so
  // y = (1/n) * T_{-}( lam .* T_{+}(x) ) where T_{s} is the unnormalized
  // transform with twiddle sign s.
  std::vector<cdouble> lam = first_column, y = x;
  fft_radix2(lam, +1);  // eigenvalues
  fft_radix2(y, +1);
  for (size_t i = 0; i < n; ++i) y[i] *= lam[i];
  fft_radix2(y, -1);
  for (auto& v : y) v /= double(n);
  return y;
}

// Toeplitz (d = r = 1) matvec by circulant embedding of order 2^ceil >= 2n-1.
inline std::vector<cdouble> toeplitz_matvec(int n, const TrigPolynomial& p,
                                            const std::vector<cdouble>& x) {
  if (p.levels() != 1 || p.block_order() != 1)
    throw InvalidParameterError("toeplitz_matvec: requires d = r = 1");
  if (int(x.size()) != n) throw InvalidParameterError("toeplitz_matvec: size mismatch");
  const size_t m = next_power_of_two(size_t(2 * n - 1));
  std::vector<cdouble> col(m, 0.0), xe(m, 0.0);
  for (const auto& [k, F] : p.coefficients()) {
    const int kk = k[0];
    if (std::abs(kk) >= n) continue;
    if (kk >= 0)
      col[kk] += F(0, 0);
    else
      col[m + kk] += F(0, 0);
  }
  std::copy(x.begin(), x.end(), xe.begin());
  std::vector<cdouble> y = circulant_matvec(col, xe);
  y.resize(n);
  return y;
}

// omega-circulant: Toeplitz-structured, entries strictly above the main
// diagonal carry the extra factor omega (the expansion sum_k a_k (Z_n^w)^k).
// omega = 1 reduces to the circulant.
inline Matrix omega_circulant(int n, cdouble omega, const std::vector<cdouble>& coeffs) {
  if (omega == cdouble(0.0)) throw InvalidParameterError("omega_circulant: omega must be nonzero");
  if (int(coeffs.size()) != n) throw InvalidParameterError("omega_circulant: need n coefficients");
  Matrix C(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const cdouble a = coeffs[((i - j) % n + n) % n];
      C(i, j) = (i < j) ? omega * a : a;
    }
  return C;
}

// Eigenvalues p(2 pi j / n) with p(theta) = sum_k w^{k/n} a_k e^{ik theta},
// principal branch of the root.
inline std::vector<cdouble> omega_circulant_eigenvalues(int n, cdouble omega,
                                                        const std::vector<cdouble>& coeffs) {
  if (omega == cdouble(0.0)) throw InvalidParameterError("omega_circulant: omega must be nonzero");
  const cdouble root = std::exp(std::log(omega) / double(n));
  std::vector<cdouble> scaled(coeffs.size());
  cdouble w(1.0);
  for (size_t k = 0; k < coeffs.size(); ++k) {
    scaled[k] = coeffs[k] * w;
    w *= root;
  }
  return dft(scaled, +1);
}

// DST-I matrix Q_n = sqrt(2/(n+1)) [ sin(rs pi/(n+1)) ]_{r,s=1..n};
// real, symmetric, orthogonal.
inline Matrix dst_matrix(int n) {
  Matrix Q(n, n);
  const double f = std::sqrt(2.0 / (n + 1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Q(i, j) = f * std::sin((i + 1) * (j + 1) * M_PI / (n + 1));
  return Q;
}

// sum_k a_k W_n^k with W_n = tridiag(1, 0, 1).
inline Matrix tau_matrix(int n, const std::vector<double>& coeffs) {
  if (int(coeffs.size()) > n) throw InvalidParameterError("tau_matrix: too many coefficients");
  Matrix S(n, n);
  Matrix P = Matrix::identity(n);  // W^0
  for (size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] != 0.0) S += P * cdouble(coeffs[k]);
    if (k + 1 < coeffs.size()) {
      // P <- W P, a tridiagonal multiply
      Matrix Pn(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          cdouble acc = 0.0;
          if (i > 0) acc += P(i - 1, j);
          if (i + 1 < n) acc += P(i + 1, j);
          Pn(i, j) = acc;
        }
      P = std::move(Pn);
    }
  }
  return S;
}

// Eigenvalues of a tau matrix from the DST of its first column:
// S = Q diag(l) Q  =>  l_i = (Q S e_1)_i / (Q e_1)_i.
inline std::vector<double> tau_eigenvalues(const Matrix& S) {
  const int n = S.rows();
  const Matrix Q = dst_matrix(n);
  std::vector<double> num(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) acc += Q(i, k).real() * S(k, 0).real();
    num[i] = acc;
  }
  std::vector<double> lam(n);
  for (int i = 0; i < n; ++i) lam[i] = num[i] / Q(i, 0).real();
  return lam;
}

// Hankel matrix with entries a_{i+j} constant along anti-diagonals; the
// coefficient vector lists a_2, ..., a_{2n} (2n-1 values).
inline Matrix hankel(int n, const std::vector<cdouble>& coeffs) {
  if (int(coeffs.size()) != 2 * n - 1)
    throw InvalidParameterError("hankel: need 2n-1 coefficients a_2..a_{2n}");
  Matrix H(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) H(i, j) = coeffs[i + j];
  return H;
}

// Block diagonal sampling matrix: blocks a(i/n) in lexicographic multi-index
// order, i = 1..n componentwise.
inline Matrix diagonal_sampling(const MultiIndex& n, const SamplingFn& a) {
  if (n.levels() != a.d) throw InvalidParameterError("diagonal_sampling: level mismatch");
  const long N = n.total();
  Matrix D(int(N) * a.r, int(N) * a.r);
  std::vector<int> idx(n.levels(), 0);
  std::vector<double> x(n.levels());
  do {
    for (int l = 0; l < n.levels(); ++l) x[l] = double(idx[l] + 1) / n.comps[l];
    const Matrix blk = a.eval(x);
    const long b = flatten_offset(idx, n) * a.r;
    for (int i = 0; i < a.r; ++i)
      for (int j = 0; j < a.r; ++j) D(int(b + i), int(b + j)) = blk(i, j);
  } while (next_offset(idx, n));
  return D;
}

inline Matrix diagonal_sampling(int n, const SamplingFn& a) {
  return diagonal_sampling(MultiIndex{n}, a);
}

}  // namespace gltlab
