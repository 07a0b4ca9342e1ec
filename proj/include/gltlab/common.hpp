#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace gltlab {

using cdouble = std::complex<double>;

// Central tolerance table. Everything below is an absolute or relative
// tolerance used by the checks in this library; tests pin against these.
namespace tol {
inline constexpr double hermitian_check = 1e-12;   // |a_ij - conj(a_ji)| <= this * (1 + max|a_ij|)
inline constexpr double unitary_check = 1e-10;     // ||V*V - I||_max
inline constexpr double reconstruct_check = 1e-9;  // ||A - V diag(l) V*||_max relative
inline constexpr double cholesky_residual = 1e-10; // ||R R* - A||_max relative
inline constexpr double jacobi_offdiag = 1e-13;    // off-diagonal Frobenius mass relative to ||A||_F
inline constexpr double fast_matvec = 1e-10;       // FFT vs dense matvec, relative
inline constexpr double degenerate_ratio = 1e-12;  // |c_j - 1| below which log(c)/(c-1) -> 1
inline constexpr double karcher_residual = 1e-10;  // default Frobenius residual target
inline constexpr double candidate_stab = 1e-6;     // default stabilization for the eps-limit
}  // namespace tol

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidInputError : Error {
  using Error::Error;
};

struct InvalidParameterError : Error {
  using Error::Error;
};

// Raised when a Cholesky pivot fails or an HPD precondition is violated.
struct NotPositiveDefiniteError : Error {
  int index = -1;          // failing pivot index, when known
  double lambda_min = 0.0; // smallest eigenvalue, when known
  NotPositiveDefiniteError(const std::string& what, int idx, double lmin)
      : Error(what), index(idx), lambda_min(lmin) {}
};

// Raised when a scalar function is applied outside its domain (log, sqrt^{-1}, ...).
struct DomainError : Error {
  double lambda_min = 0.0;
  DomainError(const std::string& what, double lmin) : Error(what), lambda_min(lmin) {}
};

struct SizeError : Error {
  using Error::Error;
};

}  // namespace gltlab
