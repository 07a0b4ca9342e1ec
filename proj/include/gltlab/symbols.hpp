#pragma once

#include <cstdint>

#include "gltlab/geomean.hpp"
#include "gltlab/parallel.hpp"
#include "gltlab/trig_polynomial.hpp"

namespace gltlab {

// Matrix-valued symbol kappa(x, theta) on [0,1]^d x [-pi,pi]^d.
struct SymbolFn {
  int d = 1, r = 1;
  std::function<Matrix(const std::vector<double>& x, const std::vector<double>& theta)> eval;

  static SymbolFn scalar(std::function<double(double, double)> f) {
    SymbolFn s;
    s.eval = [f = std::move(f)](const std::vector<double>& x, const std::vector<double>& th) {
      Matrix M(1, 1);
      M(0, 0) = f(x[0], th[0]);
      return M;
    };
    return s;
  }

  static SymbolFn scalar2(
      std::function<double(double, double, double, double)> f) {  // (x, y, t1, t2)
    SymbolFn s;
    s.d = 2;
    s.eval = [f = std::move(f)](const std::vector<double>& x, const std::vector<double>& th) {
      Matrix M(1, 1);
      M(0, 0) = f(x[0], x[1], th[0], th[1]);
      return M;
    };
    return s;
  }

  static SymbolFn constant(const Matrix& C, int d = 1) {
    SymbolFn s;
    s.d = d;
    s.r = C.rows();
    s.eval = [C](const std::vector<double>&, const std::vector<double>&) { return C; };
    return s;
  }
};

// Symbol samples on a tensor grid; values in lexicographic node order, the
// space indices outer and the frequency indices inner.
struct GridSymbol {
  int d = 1, r = 1;
  std::vector<int> m_x;      // per-dimension space grid sizes
  std::vector<int> m_theta;  // per-dimension frequency grid sizes
  std::vector<Matrix> values;
  std::vector<std::uint8_t> converged;  // per-node flag, used by candidate_symbol

  long node_count() const {
    long n = 1;
    for (int m : m_x) n *= m;
    for (int m : m_theta) n *= m;
    return n;
  }
};

// Midpoint grids: x_j = (j + 1/2)/M_x componentwise, theta_i = -pi + (i + 1/2) 2 pi / M_theta.
inline double grid_x(int j, int m) { return (j + 0.5) / m; }
inline double grid_theta(int i, int m) { return -M_PI + (i + 0.5) * 2.0 * M_PI / m; }

// Per-dimension sizes whose product lands near the requested total sample
// count (default ~2000).
inline void default_grid_sizes(int d, std::vector<int>& m_x, std::vector<int>& m_theta,
                               long target = 2000) {
  const int m = std::max(1, int(std::llround(std::pow(double(target), 1.0 / (2.0 * d)))));
  m_x.assign(d, m);
  m_theta.assign(d, m);
}

namespace detail {
inline void decode_node(long node, const GridSymbol& g, std::vector<double>& x,
                        std::vector<double>& th) {
  const int d = g.d;
  x.resize(d);
  th.resize(d);
  std::vector<int> idx(2 * d);
  for (int i = 2 * d - 1; i >= 0; --i) {
    const int m = (i < d) ? g.m_x[i] : g.m_theta[i - d];
    idx[i] = int(node % m);
    node /= m;
  }
  for (int i = 0; i < d; ++i) x[i] = grid_x(idx[i], g.m_x[i]);
  for (int i = 0; i < d; ++i) th[i] = grid_theta(idx[d + i], g.m_theta[i]);
}
}  // namespace detail

inline GridSymbol sample_symbol(const SymbolFn& s, const std::vector<int>& m_x,
                                const std::vector<int>& m_theta) {
  if (int(m_x.size()) != s.d || int(m_theta.size()) != s.d)
    throw InvalidParameterError("sample_symbol: grid size lists must have length d");
  for (int m : m_x)
    if (m < 1) throw InvalidParameterError("sample_symbol: grid sizes must be >= 1");
  for (int m : m_theta)
    if (m < 1) throw InvalidParameterError("sample_symbol: grid sizes must be >= 1");

  GridSymbol g;
  g.d = s.d;
  g.r = s.r;
  g.m_x = m_x;
  g.m_theta = m_theta;
  g.values.resize(g.node_count());
  std::exception_ptr err;
  parallel_for(g.node_count(), [&](long node) {
    try {
      std::vector<double> x, th;
      detail::decode_node(node, g, x, th);
      Matrix v = s.eval(x, th);
      if (!v.is_hermitian())
        throw InvalidInputError("sample_symbol: symbol returned a non-Hermitian block");
      g.values[node] = std::move(v);
    } catch (...) {
      if (!err) err = std::current_exception();
    }
  });
  if (err) std::rethrow_exception(err);
  return g;
}

inline GridSymbol sample_symbol(const SymbolFn& s, long target_samples = 2000) {
  std::vector<int> mx, mt;
  default_grid_sizes(s.d, mx, mt, target_samples);
  return sample_symbol(s, mx, mt);
}

// All r eigenvalues of every block, merged and sorted nondecreasing; the
// monotone rearrangement of the sampled symbol.
inline std::vector<double> rearrange(const GridSymbol& g) {
  std::vector<double> out;
  out.reserve(g.values.size() * g.r);
  for (const Matrix& v : g.values) {
    if (g.r == 1) {
      out.push_back(v(0, 0).real());
    } else {
      for (double l : hermitian_eigenvalues(v)) out.push_back(l);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Pointwise ALM mean of two symbols; both must be HPD wherever evaluated.
inline SymbolFn geometric_mean_symbol(const SymbolFn& kappa, const SymbolFn& xi) {
  if (kappa.d != xi.d || kappa.r != xi.r)
    throw InvalidParameterError("geometric_mean_symbol: dimension mismatch");
  SymbolFn out;
  out.d = kappa.d;
  out.r = kappa.r;
  out.eval = [kappa, xi](const std::vector<double>& x, const std::vector<double>& th) {
    try {
      return alm_mean(kappa.eval(x, th), xi.eval(x, th));
    } catch (const NotPositiveDefiniteError& e) {
      throw DomainError(
          "geometric_mean_symbol: symbol singular at an evaluation point; use candidate_symbol",
          e.lambda_min);
    }
  };
  return out;
}

// Default regularization ladder for the candidate symbol: 1e-1, ..., 1e-8.
inline std::vector<double> default_epsilon_sequence() {
  std::vector<double> eps;
  for (int e = 1; e <= 8; ++e) eps.push_back(std::pow(10.0, -e));
  return eps;
}

// Pointwise eps-limit of G(kappa + eps I, xi + eps I) along a decreasing
// ladder; a node is marked converged once successive iterates differ by less
// than stab_tol in max-norm. Non-stabilized nodes keep the last iterate.
inline GridSymbol candidate_symbol(const SymbolFn& kappa, const SymbolFn& xi,
                                   const std::vector<int>& m_x, const std::vector<int>& m_theta,
                                   std::vector<double> eps_sequence = default_epsilon_sequence(),
                                   double stab_tol = tol::candidate_stab) {
  if (kappa.d != xi.d || kappa.r != xi.r)
    throw InvalidParameterError("candidate_symbol: dimension mismatch");
  if (eps_sequence.empty()) throw InvalidParameterError("candidate_symbol: empty epsilon ladder");
  for (size_t i = 0; i < eps_sequence.size(); ++i)
    if (eps_sequence[i] <= 0.0 || (i > 0 && !(eps_sequence[i] < eps_sequence[i - 1])))
      throw InvalidParameterError("candidate_symbol: ladder must be positive decreasing");

  GridSymbol g;
  g.d = kappa.d;
  g.r = kappa.r;
  g.m_x = m_x;
  g.m_theta = m_theta;
  g.values.resize(g.node_count());
  g.converged.assign(g.node_count(), 0);

  const Matrix I = Matrix::identity(g.r);
  std::exception_ptr err;
  parallel_for(g.node_count(), [&](long node) {
    try {
      std::vector<double> x, th;
      detail::decode_node(node, g, x, th);
      const Matrix K = kappa.eval(x, th).hermitized();
      const Matrix X = xi.eval(x, th).hermitized();
      Matrix prev;
      bool have_prev = false, stable = false;
      for (double eps : eps_sequence) {
        Matrix v = alm_mean(K + I * cdouble(eps), X + I * cdouble(eps));
        if (have_prev && (v - prev).max_abs() < stab_tol) {
          prev = std::move(v);
          stable = true;
          break;
        }
        prev = std::move(v);
        have_prev = true;
      }
      g.values[node] = std::move(prev);
      g.converged[node] = stable ? 1 : 0;
    } catch (...) {
      if (!err) err = std::current_exception();
    }
  });
  if (err) std::rethrow_exception(err);
  return g;
}

}  // namespace gltlab
