#pragma once

#include <iostream>

#include "gltlab/eig.hpp"

namespace gltlab {

namespace detail {
// HPD gate: cheap Cholesky probe first, eigenvalue only for the error report.
inline void require_hpd(const Matrix& A, const char* who) {
  require_hermitian(A, who);
  try {
    cholesky(A);
  } catch (const NotPositiveDefiniteError&) {
    const double lmin = hermitian_eigenvalues(A).front();
    throw NotPositiveDefiniteError(
        std::string(who) + ": input not positive definite (lambda_min = " + std::to_string(lmin) +
            ")",
        -1, lmin);
  }
}
}  // namespace detail

// Ando-Li-Mathias geometric mean A^{1/2} (A^{-1/2} B A^{-1/2})^{1/2} A^{1/2}.
inline Matrix alm_mean(const Matrix& A, const Matrix& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols())
    throw InvalidInputError("alm_mean: order mismatch");
  detail::require_hpd(A, "alm_mean");
  detail::require_hpd(B, "alm_mean");

  EigDecomposition eg = eig_hermitian(A);
  const int n = A.rows();
  std::vector<double> sq(n), isq(n);
  for (int i = 0; i < n; ++i) {
    sq[i] = std::sqrt(eg.eigenvalues[i]);
    isq[i] = 1.0 / sq[i];
  }
  const Matrix As = detail::assemble(eg, sq);
  const Matrix Ais = detail::assemble(eg, isq);
  const Matrix M = (Ais * B * Ais).hermitized();
  // psd_pow clamps the eps * ||M|| negative roundoff that badly graded
  // inputs leave on the congruence
  return (As * psd_pow(M, 0.5) * As).hermitized();
}

// Inversion-free surrogate (A B^2 A)^{1/4}; equals alm_mean for commuting
// inputs and stays defined for positive semidefinite ones.
inline Matrix commuting_form_mean(const Matrix& A, const Matrix& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols())
    throw InvalidInputError("commuting_form_mean: order mismatch");
  const Matrix S = (A * B * B * A).hermitized();
  return psd_pow(S, 0.25);
}

struct KarcherConfig {
  int max_iterations = 200;
  double residual_tol = tol::karcher_residual;  // Frobenius norm of the gradient
  enum class Theta { adaptive, fixed } theta_mode = Theta::adaptive;
  double theta_value = 0.0;  // used when theta_mode == fixed
  enum class Init { arithmetic_mean, first_matrix, identity, given } init_mode =
      Init::arithmetic_mean;
  Matrix initial_guess;  // used when init_mode == given
  bool use_cholesky_form = true;
};

struct KarcherResult {
  Matrix mean;
  int iterations = 0;
  std::vector<double> residual_history;
  bool converged = false;
};

struct KarcherStep {
  double theta = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  std::vector<double> c;  // spectral spreads c_j = lmax(M_j)/lmin(M_j)
};

namespace detail {
// beta/gamma terms with the analytic limit log(c)/(c-1) -> 1 as c -> 1.
inline void accumulate_theta_terms(double c, double& beta, double& gamma) {
  if (std::abs(c - 1.0) < tol::degenerate_ratio) {
    beta += 1.0;
    gamma += 1.0;
  } else {
    const double t = std::log(c) / (c - 1.0);
    beta += t;
    gamma += c * t;
  }
}
}  // namespace detail

// Adaptive step size from the spreads of M_j = G^{1/2} A_j^{-1} G^{1/2};
// computed through S_j = L^{-1} A_j L^{-*} (same spread, no inversion), with
// G = L L*.
inline KarcherStep karcher_step_theta(const Matrix& G, const std::vector<Matrix>& A_list) {
  detail::require_hpd(G, "karcher_step_theta");
  const Matrix L = cholesky(G);
  KarcherStep st;
  for (const Matrix& A : A_list) {
    const Matrix S = congruence_solve(L, A);
    const auto ev = hermitian_eigenvalues(S);
    if (ev.front() <= 0.0)
      throw NotPositiveDefiniteError("karcher_step_theta: intermediate not positive definite", -1,
                                     ev.front());
    st.c.push_back(ev.back() / ev.front());
    detail::accumulate_theta_terms(st.c.back(), st.beta, st.gamma);
  }
  st.theta = 2.0 / (st.gamma + st.beta);
  return st;
}

// Frobenius norm of sum_i log(X^{1/2} A_i^{-1} X^{1/2}); zero exactly at the
// Karcher mean. Kept independent of the iteration path for cross-checking.
inline double karcher_residual(const Matrix& X, const std::vector<Matrix>& A_list) {
  const Matrix Xs = hpd_sqrt(X);
  Matrix sum = Matrix::zero(X.rows(), X.cols());
  for (const Matrix& A : A_list) {
    const Matrix M = (Xs * hpd_inverse(A) * Xs).hermitized();
    sum += hpd_log(M);
  }
  return sum.frobenius_norm();
}

// Karcher mean by the adaptive Richardson iteration. Default form works on the
// Cholesky factor of the iterate: X <- X + theta L (sum_i log(L^{-1} A_i L^{-*})) L*,
// which is algebraically identical to
// X <- X - theta X^{1/2} (sum_i log(X^{1/2} A_i^{-1} X^{1/2})) X^{1/2}
// but needs no inverses or matrix square roots.
inline KarcherResult karcher_mean(const std::vector<Matrix>& A_list,
                                  const KarcherConfig& cfg = {}) {
  if (A_list.size() < 2) throw InvalidParameterError("karcher_mean: need at least 2 matrices");
  if (cfg.max_iterations < 1 || cfg.residual_tol <= 0.0)
    throw InvalidParameterError("karcher_mean: bad config");
  const int n = A_list.front().rows();
  for (const Matrix& A : A_list) {
    if (A.rows() != n || A.cols() != n) throw InvalidInputError("karcher_mean: order mismatch");
    detail::require_hpd(A, "karcher_mean");
  }
  const double k = double(A_list.size());

  Matrix X;
  switch (cfg.init_mode) {
    case KarcherConfig::Init::arithmetic_mean: {
      X = Matrix::zero(n, n);
      for (const Matrix& A : A_list) X += A;
      X *= cdouble(1.0 / k);
      break;
    }
    case KarcherConfig::Init::first_matrix: X = A_list.front(); break;
    case KarcherConfig::Init::identity: X = Matrix::identity(n); break;
    case KarcherConfig::Init::given:
      X = cfg.initial_guess;
      detail::require_hpd(X, "karcher_mean init");
      break;
  }

  KarcherResult out;
  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    Matrix grad;   // sum of logs in the chosen coordinates
    Matrix Xhalf;  // L (cholesky form) or X^{1/2}
    double beta = 0.0, gamma = 0.0;
    if (cfg.use_cholesky_form) {
      Xhalf = cholesky(X);
      grad = Matrix::zero(n, n);
      for (const Matrix& A : A_list) {
        const Matrix S = congruence_solve(Xhalf, A);
        EigDecomposition eg = eig_hermitian(S);
        if (eg.eigenvalues.front() <= 0.0)
          throw NotPositiveDefiniteError("karcher_mean: congruence lost definiteness", -1,
                                         eg.eigenvalues.front());
        std::vector<double> lg(eg.eigenvalues.size());
        for (size_t i = 0; i < lg.size(); ++i) lg[i] = std::log(eg.eigenvalues[i]);
        grad += detail::assemble(eg, lg);
        detail::accumulate_theta_terms(eg.eigenvalues.back() / eg.eigenvalues.front(), beta, gamma);
      }
    } else {
      Xhalf = hpd_sqrt(X);
      grad = Matrix::zero(n, n);
      for (const Matrix& A : A_list) {
        const Matrix M = (Xhalf * hpd_inverse(A) * Xhalf).hermitized();
        EigDecomposition eg = eig_hermitian(M);
        if (eg.eigenvalues.front() <= 0.0)
          throw NotPositiveDefiniteError("karcher_mean: iterate lost definiteness", -1,
                                         eg.eigenvalues.front());
        std::vector<double> lg(eg.eigenvalues.size());
        for (size_t i = 0; i < lg.size(); ++i) lg[i] = std::log(eg.eigenvalues[i]);
        grad += detail::assemble(eg, lg);
        detail::accumulate_theta_terms(eg.eigenvalues.back() / eg.eigenvalues.front(), beta, gamma);
      }
      grad *= cdouble(-1.0);  // log(M_j) = -log(S_j); keep one update formula below
    }

    const double residual = grad.frobenius_norm();
    out.residual_history.push_back(residual);
    if (residual < cfg.residual_tol) {
      out.converged = true;
      out.iterations = iter;
      break;
    }
    out.iterations = iter + 1;

    double theta = (cfg.theta_mode == KarcherConfig::Theta::adaptive) ? 2.0 / (gamma + beta)
                                                                      : cfg.theta_value;
    const Matrix update = (Xhalf * grad * Xhalf.adjoint()).hermitized();
    bool stepped = false;
    for (int attempt = 0; attempt <= 10; ++attempt) {
      Matrix Xn = X + update * cdouble(theta);
      Xn = Xn.hermitized();
      try {
        cholesky(Xn);  // positivity probe
        X = std::move(Xn);
        stepped = true;
        break;
      } catch (const NotPositiveDefiniteError&) {
        theta *= 0.5;
      }
    }
    if (!stepped) {
      out.mean = X;
      out.converged = false;
      return out;
    }
  }

  out.mean = X;

  // soft monotonicity check on converged runs (warning only)
  if (out.converged) {
    for (size_t i = 4; i < out.residual_history.size(); ++i) {
      if (out.residual_history[i] > out.residual_history[i - 1]) {
        std::cerr << "karcher_mean: residual history not monotone after iterate 3\n";
        break;
      }
    }
  }
  return out;
}

}  // namespace gltlab
