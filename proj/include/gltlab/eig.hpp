#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <type_traits>

#include "gltlab/matrix.hpp"

namespace gltlab {

// Eigendecomposition of a Hermitian matrix: A = V diag(eigenvalues) V*,
// eigenvalues ascending, V unitary with eigenvectors as columns.
struct EigDecomposition {
  std::vector<double> eigenvalues;
  Matrix eigenvectors;
};

namespace detail {

// ---- cyclic Jacobi for Hermitian matrices ----------------------------------
//
// Two-sided rotations in cyclic pivot order; terminates when the off-diagonal
// Frobenius mass drops below tol::jacobi_offdiag * ||A||_F. Used for small
// orders where its accuracy and simplicity win.
inline void jacobi_hermitian(Matrix& A, Matrix* V, std::vector<double>& evals) {
  const int n = A.rows();
  if (V) *V = Matrix::identity(n);
  const double anorm = A.frobenius_norm();
  const double thresh = tol::jacobi_offdiag * (anorm > 0 ? anorm : 1.0);
  const int max_sweeps = 64;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += 2.0 * std::norm(A(p, q));
    if (std::sqrt(off) <= thresh) break;

    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cdouble apq = A(p, q);
        const double alpha = std::abs(apq);
        if (alpha == 0.0) continue;
        const double app = A(p, p).real();
        const double aqq = A(q, q).real();
        // phase that realifies the pivot, then a real Givens rotation
        const cdouble phase = apq / alpha;  // e^{i phi}
        const double tau = (aqq - app) / (2.0 * alpha);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // J = [[c, s], [-s conj(phase), c conj(phase)]] on columns (p,q)
        const cdouble jqp = -s * std::conj(phase);
        const cdouble jqq = c * std::conj(phase);
        for (int k = 0; k < n; ++k) {  // A <- A J
          const cdouble akp = A(k, p), akq = A(k, q);
          A(k, p) = akp * c + akq * jqp;
          A(k, q) = akp * s + akq * jqq;
        }
        for (int k = 0; k < n; ++k) {  // A <- J* A
          const cdouble apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * phase * aqk;
          A(q, k) = s * apk + c * phase * aqk;
        }
        A(p, q) = 0.0;
        A(q, p) = 0.0;
        if (V) {
          for (int k = 0; k < n; ++k) {
            const cdouble vkp = (*V)(k, p), vkq = (*V)(k, q);
            (*V)(k, p) = vkp * c + vkq * jqp;
            (*V)(k, q) = vkp * s + vkq * jqq;
          }
        }
      }
    }
  }
  evals.resize(n);
  for (int i = 0; i < n; ++i) evals[i] = A(i, i).real();
}

// ---- Householder tridiagonalization + implicit-shift QL ---------------------
//
// Templated over double (real symmetric) and complex<double> (Hermitian); the
// real instantiation is the fast path for the real matrices that dominate this
// project.
template <class T>
inline double abs2_of(T v) {
  if constexpr (std::is_same_v<T, double>)
    return v * v;
  else
    return std::norm(v);
}
template <class T>
inline T conj_of(T v) {
  if constexpr (std::is_same_v<T, double>)
    return v;
  else
    return std::conj(v);
}
template <class T>
inline double real_of(T v) {
  if constexpr (std::is_same_v<T, double>)
    return v;
  else
    return v.real();
}

template <class T>
struct Dense {
  int n = 0;
  std::vector<T> a;  // row-major n x n
  explicit Dense(int nn = 0) : n(nn), a(size_t(nn) * nn, T(0)) {}
  T& operator()(int i, int j) { return a[size_t(i) * n + j]; }
  const T& operator()(int i, int j) const { return a[size_t(i) * n + j]; }
};

// Reduces A to real tridiagonal (d, e) by Householder similarity; e[0] is
// unused, e[k] couples rows k-1 and k. If Q is nonnull it receives the unitary
// with A = Q T Q*. A is destroyed.
template <class T>
void tridiagonalize(Dense<T>& A, std::vector<double>& d, std::vector<double>& e, Dense<T>* Q) {
  const int n = A.n;
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  std::vector<T> esub(std::max(0, n - 1), T(0));
  std::vector<T> v(n), w(n);
  std::vector<T> taus(std::max(0, n - 2), T(0));

  for (int k = 0; k < n - 2; ++k) {
    double sigma2 = 0.0;
    for (int i = k + 1; i < n; ++i) sigma2 += abs2_of(A(i, k));
    const double sigma = std::sqrt(sigma2);
    const T x0 = A(k + 1, k);
    if (sigma == 0.0) {
      esub[k] = T(0);
      continue;
    }
    const double ax0 = std::sqrt(abs2_of(x0));
    T alpha;
    if (ax0 == 0.0)
      alpha = T(-sigma);
    else
      alpha = x0 * T(-sigma / ax0);
    const double vnorm2 = 2.0 * sigma * (sigma + ax0);
    if (vnorm2 == 0.0) {
      esub[k] = x0;
      continue;
    }
    const double tau = 2.0 / vnorm2;
    for (int i = k + 1; i < n; ++i) v[i] = A(i, k);
    v[k + 1] -= alpha;

    // w = tau A v on the trailing block, then A <- A - v w* - w v*
    T vAv(0);
    for (int i = k + 1; i < n; ++i) {
      T acc(0);
      const T* row = &A(i, 0);
      for (int j = k + 1; j < n; ++j) acc += row[j] * v[j];
      w[i] = acc * T(tau);
      vAv += conj_of(v[i]) * w[i];
    }
    const T half = vAv * T(0.5 * tau);
    for (int i = k + 1; i < n; ++i) w[i] -= half * v[i];
    for (int i = k + 1; i < n; ++i) {
      const T vi = v[i], wi = w[i];
      T* row = &A(i, 0);
      for (int j = k + 1; j < n; ++j) row[j] -= vi * conj_of(w[j]) + wi * conj_of(v[j]);
    }

    esub[k] = alpha;
    taus[k] = T(tau);
    for (int i = k + 1; i < n; ++i) A(i, k) = v[i];  // reflector storage
  }
  if (n >= 2) esub[n - 2] = A(n - 1, n - 2);

  if (Q) {
    *Q = Dense<T>(n);
    for (int i = 0; i < n; ++i) (*Q)(i, i) = T(1);
    for (int k = n - 3; k >= 0; --k) {
      if (taus[k] == T(0)) continue;
      const T tau = taus[k];
      for (int col = k + 1; col < n; ++col) {
        T acc(0);
        for (int i = k + 1; i < n; ++i) acc += conj_of(A(i, k)) * (*Q)(i, col);
        acc *= tau;
        for (int i = k + 1; i < n; ++i) (*Q)(i, col) -= A(i, k) * acc;
      }
    }
  }

  for (int i = 0; i < n; ++i) d[i] = real_of(A(i, i));

  if constexpr (std::is_same_v<T, double>) {
    for (int k = 0; k + 1 < n; ++k) e[k + 1] = esub[k];
  } else {
    // absorb subdiagonal phases so e is real nonnegative; fold them into Q
    std::vector<T> phases(n, T(1));
    T run(1);
    for (int k = 0; k + 1 < n; ++k) {
      const double m = std::sqrt(abs2_of(esub[k]));
      e[k + 1] = m;
      if (m > 0.0) run *= esub[k] / T(m);
      phases[k + 1] = run;
    }
    if (Q)
      for (int i = 0; i < n; ++i)
        for (int j = 1; j < n; ++j) (*Q)(i, j) *= phases[j];
  }
}

// Implicit-shift QL on the tridiagonal (d, e); rotations are optionally
// accumulated into the columns of Z. Classic EISPACK tql2 scheme.
template <class T>
bool tql_implicit(std::vector<double>& d, std::vector<double>& e, Dense<T>* Z) {
  const int n = int(d.size());
  if (n == 0) return true;
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  const double eps = std::numeric_limits<double>::epsilon();
  const double tiny = std::numeric_limits<double>::min();
  double anorm = 0.0;
  for (int i = 0; i < n; ++i) anorm = std::max(anorm, std::abs(d[i]) + std::abs(e[i]));
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        // local geometric-mean deflation keeps relative accuracy on graded
        // matrices; the threshold is relaxed only if the iteration stalls
        double thr = eps * std::sqrt(std::abs(d[m]) * std::abs(d[m + 1])) + tiny;
        if (iter >= 40) thr = eps * (std::abs(d[m]) + std::abs(d[m + 1])) + tiny;
        if (iter >= 70) thr += eps * anorm;
        if (std::abs(e[m]) <= thr) break;
      }
      if (m != l) {
        if (iter++ == 100) return false;
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + (g >= 0 ? std::abs(r) : -std::abs(r)));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (Z) {
            for (int k = 0; k < Z->n; ++k) {
              const T zk1 = (*Z)(k, i + 1), zk0 = (*Z)(k, i);
              (*Z)(k, i + 1) = T(s) * zk0 + T(c) * zk1;
              (*Z)(k, i) = T(c) * zk0 - T(s) * zk1;
            }
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  return true;
}

template <class T>
void sort_ascending(std::vector<double>& d, Dense<T>* Z) {
  const int n = int(d.size());
  for (int i = 0; i < n - 1; ++i) {
    int k = i;
    for (int j = i + 1; j < n; ++j)
      if (d[j] < d[k]) k = j;
    if (k != i) {
      std::swap(d[i], d[k]);
      if (Z)
        for (int r = 0; r < Z->n; ++r) std::swap((*Z)(r, i), (*Z)(r, k));
    }
  }
}

inline Dense<double> to_real_dense(const Matrix& A) {
  Dense<double> D(A.rows());
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j) D(i, j) = A(i, j).real();
  return D;
}

inline Dense<cdouble> to_complex_dense(const Matrix& A) {
  Dense<cdouble> D(A.rows());
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j) D(i, j) = A(i, j);
  return D;
}

template <class T>
Matrix to_matrix(const Dense<T>& D) {
  Matrix M(D.n, D.n);
  for (int i = 0; i < D.n; ++i)
    for (int j = 0; j < D.n; ++j) M(i, j) = D(i, j);
  return M;
}

template <class T>
void eig_tridiag_path(const Matrix& A0, std::vector<double>& evals, Matrix* vecs) {
  const Matrix A = A0.hermitized();
  Dense<T> D = [&] {
    if constexpr (std::is_same_v<T, double>)
      return to_real_dense(A);
    else
      return to_complex_dense(A);
  }();
  std::vector<double> d, e;
  Dense<T> Q;
  tridiagonalize(D, d, e, vecs ? &Q : nullptr);

  // QL extracts at the head and keeps relative accuracy when the grading
  // increases from there; flip strongly top-heavy matrices (J T J has the
  // same spectrum, eigenvectors pick up reversed Q columns).
  const int n = int(d.size());
  double head = 0.0, tail = 0.0;
  for (int i = 0; i < n / 2; ++i) {
    head += std::abs(d[i]);
    tail += std::abs(d[n - 1 - i]);
  }
  if (head > tail) {
    std::reverse(d.begin(), d.end());
    std::vector<double> er(n, 0.0);
    for (int k = 1; k < n; ++k) er[k] = e[n - k];
    e = std::move(er);
    if (vecs) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n / 2; ++j) std::swap(Q(i, j), Q(i, n - 1 - j));
    }
  }

  if (!tql_implicit(d, e, vecs ? &Q : nullptr))
    throw Error("tridiagonal QL iteration failed to converge");
  sort_ascending(d, vecs ? &Q : nullptr);
  evals = std::move(d);
  if (vecs) *vecs = to_matrix(Q);
}

}  // namespace detail

// Orders up to this bound go through cyclic Jacobi; larger ones through
// Householder tridiagonalization + QL, which has the better constant.
inline constexpr int kJacobiMaxOrder = 64;

inline void require_hermitian(const Matrix& A, const char* who) {
  if (A.rows() != A.cols()) throw InvalidInputError(std::string(who) + ": matrix not square");
  if (!A.is_hermitian())
    throw InvalidInputError(std::string(who) + ": matrix not Hermitian within tolerance");
}

// Eigenvalues only, ascending. Cheaper than eig_hermitian: no accumulation.
inline std::vector<double> hermitian_eigenvalues(const Matrix& A) {
  require_hermitian(A, "hermitian_eigenvalues");
  const int n = A.rows();
  std::vector<double> evals;
  if (n <= kJacobiMaxOrder) {
    Matrix W = A.hermitized();
    detail::jacobi_hermitian(W, nullptr, evals);
    std::sort(evals.begin(), evals.end());
    return evals;
  }
  if (A.is_real(0.0))
    detail::eig_tridiag_path<double>(A, evals, nullptr);
  else
    detail::eig_tridiag_path<cdouble>(A, evals, nullptr);
  return evals;
}

// Full decomposition, eigenvalues ascending, eigenvectors as columns.
inline EigDecomposition eig_hermitian(const Matrix& A) {
  require_hermitian(A, "eig_hermitian");
  const int n = A.rows();
  EigDecomposition out;
  if (n <= kJacobiMaxOrder) {
    Matrix W = A.hermitized();
    Matrix V;
    detail::jacobi_hermitian(W, &V, out.eigenvalues);
    // sort ascending, permuting columns alongside
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return out.eigenvalues[a] < out.eigenvalues[b]; });
    std::vector<double> sorted(n);
    Matrix Vs(n, n);
    for (int j = 0; j < n; ++j) {
      sorted[j] = out.eigenvalues[idx[j]];
      for (int i = 0; i < n; ++i) Vs(i, j) = V(i, idx[j]);
    }
    out.eigenvalues = std::move(sorted);
    out.eigenvectors = std::move(Vs);
    return out;
  }
  if (A.is_real(0.0))
    detail::eig_tridiag_path<double>(A, out.eigenvalues, &out.eigenvectors);
  else
    detail::eig_tridiag_path<cdouble>(A, out.eigenvalues, &out.eigenvectors);
  return out;
}

// V f(diag) V* for a real scalar function f applied to the eigenvalues.
inline Matrix hpd_function(const Matrix& A, const std::function<double(double)>& f) {
  EigDecomposition eg = eig_hermitian(A);
  const int n = A.rows();
  std::vector<double> fl(n);
  for (int i = 0; i < n; ++i) fl[i] = f(eg.eigenvalues[i]);
  // V diag(fl) V*
  Matrix W = eg.eigenvectors;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) W(i, j) *= fl[j];
  return (W * eg.eigenvectors.adjoint()).hermitized();
}

namespace detail {
inline void require_positive_spectrum(const std::vector<double>& evals, const char* fname) {
  if (!evals.empty() && evals.front() <= 0.0)
    throw DomainError(std::string(fname) + ": spectrum not positive (lambda_min = " +
                          std::to_string(evals.front()) + ")",
                      evals.front());
}

inline Matrix assemble(const EigDecomposition& eg, const std::vector<double>& fl) {
  Matrix W = eg.eigenvectors;
  const int n = W.rows();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) W(i, j) *= fl[j];
  return (W * eg.eigenvectors.adjoint()).hermitized();
}

inline Matrix hpd_apply_checked(const Matrix& A, double (*f)(double), const char* fname) {
  EigDecomposition eg = eig_hermitian(A);
  require_positive_spectrum(eg.eigenvalues, fname);
  std::vector<double> fl(eg.eigenvalues.size());
  for (size_t i = 0; i < fl.size(); ++i) fl[i] = f(eg.eigenvalues[i]);
  return assemble(eg, fl);
}
}  // namespace detail

inline Matrix hpd_sqrt(const Matrix& A) {
  return detail::hpd_apply_checked(A, [](double x) { return std::sqrt(x); }, "hpd_sqrt");
}
inline Matrix hpd_inv_sqrt(const Matrix& A) {
  return detail::hpd_apply_checked(A, [](double x) { return 1.0 / std::sqrt(x); }, "hpd_inv_sqrt");
}
inline Matrix hpd_log(const Matrix& A) {
  return detail::hpd_apply_checked(A, [](double x) { return std::log(x); }, "hpd_log");
}
inline Matrix hpd_exp(const Matrix& A) {
  EigDecomposition eg = eig_hermitian(A);
  std::vector<double> fl(eg.eigenvalues.size());
  for (size_t i = 0; i < fl.size(); ++i) fl[i] = std::exp(eg.eigenvalues[i]);
  return detail::assemble(eg, fl);
}
inline Matrix hpd_inverse(const Matrix& A) {
  return detail::hpd_apply_checked(A, [](double x) { return 1.0 / x; }, "hpd_inverse");
}

// x^p on a positive semidefinite matrix; tiny negative eigenvalues from
// roundoff are clamped to zero before the power is taken.
inline Matrix psd_pow(const Matrix& A, double p) {
  EigDecomposition eg = eig_hermitian(A);
  const double floor = -1e-10 * (1.0 + std::abs(eg.eigenvalues.empty() ? 0.0 : eg.eigenvalues.back()));
  std::vector<double> fl(eg.eigenvalues.size());
  for (size_t i = 0; i < fl.size(); ++i) {
    double l = eg.eigenvalues[i];
    if (l < floor)
      throw DomainError("psd_pow: spectrum significantly negative (lambda_min = " +
                            std::to_string(l) + ")",
                        l);
    fl[i] = std::pow(std::max(l, 0.0), p);
  }
  return detail::assemble(eg, fl);
}

// Cholesky factor L (lower triangular, positive real diagonal) with A = L L*.
inline Matrix cholesky(const Matrix& A) {
  require_hermitian(A, "cholesky");
  const int n = A.rows();
  Matrix L(n, n);
  for (int j = 0; j < n; ++j) {
    double s = A(j, j).real();
    for (int k = 0; k < j; ++k) s -= std::norm(L(j, k));
    if (!(s > 0.0))
      throw NotPositiveDefiniteError(
          "cholesky: pivot " + std::to_string(j) + " is not positive (" + std::to_string(s) + ")",
          j, s);
    const double ljj = std::sqrt(s);
    L(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      cdouble acc = A(i, j);
      for (int k = 0; k < j; ++k) acc -= L(i, k) * std::conj(L(j, k));
      L(i, j) = acc / ljj;
    }
  }
  return L;
}

// X = L^{-1} B for lower-triangular L.
inline Matrix solve_lower(const Matrix& L, const Matrix& B) {
  const int n = L.rows(), m = B.cols();
  Matrix X = B;
  for (int col = 0; col < m; ++col) {
    for (int i = 0; i < n; ++i) {
      cdouble acc = X(i, col);
      for (int k = 0; k < i; ++k) acc -= L(i, k) * X(k, col);
      X(i, col) = acc / L(i, i);
    }
  }
  return X;
}

// S = L^{-1} A L^{-*}; for Hermitian A the result is Hermitian.
inline Matrix congruence_solve(const Matrix& L, const Matrix& A) {
  Matrix Y = solve_lower(L, A);                    // L^{-1} A
  Matrix S = solve_lower(L, Y.adjoint()).adjoint();  // (L^{-1} (L^{-1} A)^*)^* = L^{-1} A L^{-*}
  return S.hermitized();
}

// Singular values, descending.
inline std::vector<double> singular_values(const Matrix& A) {
  const Matrix AtA = (A.adjoint() * A).hermitized();
  std::vector<double> ev = hermitian_eigenvalues(AtA);
  std::vector<double> sv(ev.size());
  for (size_t i = 0; i < ev.size(); ++i) sv[i] = std::sqrt(std::max(ev[ev.size() - 1 - i], 0.0));
  return sv;
}

// Schatten p-norm: l^p norm of the singular value vector; p = inf gives the
// spectral norm. Any square complex matrix is accepted.
inline double schatten_norm(const Matrix& A, double p) {
  if (p < 1.0) throw InvalidParameterError("schatten_norm: p must be >= 1");
  std::vector<double> sv = singular_values(A);
  if (sv.empty()) return 0.0;
  if (std::isinf(p)) return sv.front();
  if (p == 1.0) return std::accumulate(sv.begin(), sv.end(), 0.0);
  if (p == 2.0) {
    double s = 0.0;
    for (double v : sv) s += v * v;
    return std::sqrt(s);
  }
  double s = 0.0;
  for (double v : sv) s += std::pow(v, p);
  return std::pow(s, 1.0 / p);
}

inline double spectral_norm(const Matrix& A) {
  return schatten_norm(A, std::numeric_limits<double>::infinity());
}

}  // namespace gltlab
