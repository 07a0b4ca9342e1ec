#pragma once

#include "gltlab/structured.hpp"
#include "gltlab/symbols.hpp"

namespace gltlab {

// Variable-coefficient fourth-order FD operator on (0,1):
// B_n = D_n^+ K_n^+ + D_n K_n + D_n^- K_n^- with the (1,-4,6,-4,1) stencil
// split into its three banded Toeplitz factors, h = 1/(n+3), nodes x_i = i h.
inline Matrix fd4_matrix(int n, const std::function<double(double)>& alpha) {
  const double h = 1.0 / (n + 3);
  const Matrix Kp = toeplitz(n, TrigPolynomial::scalar({{0, 1.0}, {-1, -2.0}, {-2, 1.0}}));
  const Matrix K0 = toeplitz(n, TrigPolynomial::scalar({{0, 4.0}, {1, -2.0}, {-1, -2.0}}));
  const Matrix Km = toeplitz(n, TrigPolynomial::scalar({{0, 1.0}, {1, -2.0}, {2, 1.0}}));
  std::vector<double> dp(n), d0(n), dm(n);
  for (int i = 1; i <= n; ++i) {
    dp[i - 1] = alpha((i + 2) * h);
    d0[i - 1] = alpha((i + 1) * h);
    dm[i - 1] = alpha(i * h);
  }
  Matrix B = diag(dp) * Kp + diag(d0) * K0 + diag(dm) * Km;
  return B.hermitized();  // symmetric by construction, clean roundoff
}

// Kronecker sum B_{n1} x I + I x B_{n2} for the separable 2D operator.
inline Matrix fd4_matrix_2d(int n1, int n2, const std::function<double(double)>& alpha) {
  const Matrix B1 = fd4_matrix(n1, alpha);
  const Matrix B2 = fd4_matrix(n2, alpha);
  return kron(B1, Matrix::identity(n2)) + kron(Matrix::identity(n1), B2);
}

enum class BsplineKind { quadratic_C0, cubic_C1 };
enum class BsplineWhich { stiffness, mass, sum };

// Coefficient blocks of the normalized B-spline stiffness/mass generating
// functions (2-block unilevel symbols).
inline TrigPolynomial bspline_symbol(BsplineKind kind, BsplineWhich which) {
  auto blk = [](double s, double a, double b, double c, double d) {
    Matrix M(2, 2);
    M(0, 0) = a * s; M(0, 1) = b * s; M(1, 0) = c * s; M(1, 1) = d * s;
    return M;
  };
  TrigPolynomial f(1, 2), h(1, 2);
  if (kind == BsplineKind::quadratic_C0) {
    f.set({1}, blk(1.0 / 3, 0, -2, 0, -2));
    f.set({0}, blk(1.0 / 3, 4, -2, -2, 8));
    f.set({-1}, blk(1.0 / 3, 0, 0, -2, -2));
    h.set({1}, blk(1.0 / 30, 0, 3, 0, 1));
    h.set({0}, blk(1.0 / 30, 4, 3, 3, 12));
    h.set({-1}, blk(1.0 / 30, 0, 0, 3, 1));
  } else {
    f.set({1}, blk(1.0 / 40, -15, -15, -3, -15));
    f.set({0}, blk(1.0 / 40, 48, 0, 0, 48));
    f.set({-1}, blk(1.0 / 40, -15, -3, -15, -15));
    h.set({1}, blk(1.0 / 560, 9, 53, 1, 9));
    h.set({0}, blk(1.0 / 560, 128, 80, 80, 128));
    h.set({-1}, blk(1.0 / 560, 9, 1, 53, 9));
  }
  if (which == BsplineWhich::stiffness) return f;
  if (which == BsplineWhich::mass) return h;
  TrigPolynomial e(1, 2);  // f + h, the symbol of L_n = K_n/n + n M_n
  for (const auto& [k, F] : f.coefficients()) e.set(k, F);
  for (const auto& [k, H] : h.coefficients()) {
    auto it = e.coefficients().find(k);
    e.set(k, it == e.coefficients().end() ? H : it->second + H);
  }
  return e;
}

// 2n x 2n Hermitian block Toeplitz matrix T_n(f), T_n(h) or T_n(f + h).
inline Matrix bspline_toeplitz(BsplineKind kind, BsplineWhich which, int n) {
  if (n < 2) throw InvalidParameterError("bspline_toeplitz: n must be >= 2");
  return toeplitz(n, bspline_symbol(kind, which));
}

// Quantum Curie-Weiss parameters: coupling Gamma > 0, transverse field B,
// spin count N.
struct CWParams {
  double gamma = 1.0;
  double b = 1.0;
  int n_spins = 1;

  void validate() const {
    if (gamma <= 0.0) throw InvalidParameterError("CWParams: Gamma must be positive");
    if (n_spins < 1) throw InvalidParameterError("CWParams: N must be >= 1");
  }
};

// Symmetric-subspace restriction of the normalized CW Hamiltonian as the
// (N+1) x (N+1) real symmetric tridiagonal
//   -(Gamma/2) D((2x-1)^2) - B D(sqrt((1-x)x))^{1/2} T(2 cos) D(sqrt((1-x)x))^{1/2}
// on the nodes x_k = k/(N+1): diagonal -(Gamma/2)(2x_k - 1)^2 and couplings
// -B (a_k a_{k+1})^{1/2}, a(x) = sqrt((1-x)x). The symmetrized sampling keeps
// every eigenvalue inside the range of the symbol.
inline Matrix curie_weiss_restricted(const CWParams& p) {
  p.validate();
  const int n = p.n_spins + 1;
  Matrix H(n, n);
  std::vector<double> a(n);
  for (int k = 1; k <= n; ++k) {
    const double x = double(k) / n;
    H(k - 1, k - 1) = -(p.gamma / 2.0) * (2.0 * x - 1.0) * (2.0 * x - 1.0);
    a[k - 1] = std::sqrt((1.0 - x) * x);
  }
  for (int k = 0; k + 1 < n; ++k) {
    const double c = -p.b * std::sqrt(a[k] * a[k + 1]);
    H(k, k + 1) = c;
    H(k + 1, k) = c;
  }
  return H;
}

// GLT symbol of the restricted model.
inline SymbolFn curie_weiss_symbol(double gamma, double b) {
  return SymbolFn::scalar([gamma, b](double x, double theta) {
    return -(gamma / 2.0) * (2.0 * x - 1.0) * (2.0 * x - 1.0) -
           2.0 * b * std::sqrt((1.0 - x) * x) * std::cos(theta);
  });
}

// Extrema of the symbol over a fine closed grid in x (endpoints included so
// boundary extrema like the B = 0 case are exact); theta extrema are analytic.
inline std::pair<double, double> curie_weiss_symbol_range(double gamma, double b,
                                                          int grid = 2001) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < grid; ++i) {
    const double x = double(i) / (grid - 1);
    const double q = -(gamma / 2.0) * (2 * x - 1) * (2 * x - 1);
    const double amp = 2.0 * b * std::sqrt((1.0 - x) * x);
    // extremes in theta are at cos = +-1
    lo = std::min(lo, q - std::abs(amp));
    hi = std::max(hi, q + std::abs(amp));
  }
  return {lo, hi};
}

// Full 2^N x 2^N normalized CW Hamiltonian
//   H/N, H = -(Gamma/(2N)) sum_{x,y} s3(x) s3(y) - B sum_x s1(x).
// The double sum includes x = y (s3^2 = I). Dense real symmetric; guarded to
// N <= 14.
inline Matrix curie_weiss_full(const CWParams& p) {
  p.validate();
  const int N = p.n_spins;
  if (N > 14) throw SizeError("curie_weiss_full: N > 14 would need " +
                              std::to_string((1L << N)) + "^2 dense entries");
  const long dim = 1L << N;
  Matrix H{int(dim), int(dim)};
  for (long s = 0; s < dim; ++s) {
    const int pop = __builtin_popcountll((unsigned long long)s);
    const double m = double(N - 2 * pop);  // sum of s3 values
    H(int(s), int(s)) = -(p.gamma / (2.0 * N)) * m * m / N;
    for (int x = 0; x < N; ++x) {
      const long t = s ^ (1L << x);  // single spin flip: sigma_1(x)
      H(int(s), int(t)) = -p.b / N;
    }
  }
  return H;
}

// Second-order FD discretization of the companion Schrodinger operator
// -(1/(2(N+1)^2)) a(x) u'' + c(x) u with a(x) = 2B sqrt((1-x)x) and
// c(x) = -(Gamma/2)(2x-1)^2 - 2B sqrt((1-x)x), assembled in the symmetrized
// form D(sqrt(a/2)) T(2-2cos) D(sqrt(a/2)) + D(c) on the nodes x_i = i/(N+1).
// The GLT symbol (a/2)(2-2cos) + c then equals the restricted CW symbol
// -(Gamma/2)(2x-1)^2 - 2B sqrt((1-x)x) cos(theta) identically.
inline Matrix schrodinger_fd(int N, double gamma, double b) {
  const int n = N + 1;
  Matrix T = toeplitz(n, TrigPolynomial::scalar({{0, 2.0}, {1, -1.0}, {-1, -1.0}}));
  std::vector<double> sa(n), c(n);
  for (int i = 1; i <= n; ++i) {
    const double x = double(i) / (N + 1);
    const double a = 2.0 * b * std::sqrt(std::max(0.0, (1.0 - x) * x));
    sa[i - 1] = std::sqrt(a / 2.0);
    c[i - 1] = -(gamma / 2.0) * (2 * x - 1) * (2 * x - 1) - a;
  }
  Matrix M = diag(sa) * T * diag(sa) + diag(c);
  return M.hermitized();
}

}  // namespace gltlab
