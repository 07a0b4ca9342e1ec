#pragma once

#include <map>
#include <vector>

#include "gltlab/matrix.hpp"

namespace gltlab {

// Finite Fourier-coefficient map k -> r x r block; the generating function of
// the Toeplitz-type builders. Multi-index keys have length d.
class TrigPolynomial {
 public:
  TrigPolynomial(int d, int r) : d_(d), r_(r) {}

  // Scalar d=1 convenience.
  static TrigPolynomial scalar(std::map<int, cdouble> coeffs) {
    TrigPolynomial p(1, 1);
    for (auto& [k, v] : coeffs) {
      Matrix F(1, 1);
      F(0, 0) = v;
      p.set({k}, F);
    }
    return p;
  }

  // c0 + 2*sum_j c_j cos(j theta): real even scalar symbols, d=1.
  static TrigPolynomial cosine(const std::vector<double>& c) {
    TrigPolynomial p(1, 1);
    for (int j = 0; j < int(c.size()); ++j) {
      if (c[j] == 0.0) continue;
      Matrix F(1, 1);
      F(0, 0) = c[j];
      p.set({j}, F);
      if (j > 0) p.set({-j}, F);
    }
    return p;
  }

  int levels() const { return d_; }
  int block_order() const { return r_; }

  void set(std::vector<int> k, Matrix F) {
    if (int(k.size()) != d_) throw InvalidParameterError("TrigPolynomial::set: key length != d");
    if (F.rows() != r_ || F.cols() != r_)
      throw InvalidParameterError("TrigPolynomial::set: block is not r x r");
    coeffs_[std::move(k)] = std::move(F);
  }

  const std::map<std::vector<int>, Matrix>& coefficients() const { return coeffs_; }

  // True iff F_{-k} = F_k* for every stored key, so eval is Hermitian.
  bool hermitian_symbol(double eps = tol::hermitian_check) const {
    for (const auto& [k, F] : coeffs_) {
      std::vector<int> mk(k.size());
      for (size_t i = 0; i < k.size(); ++i) mk[i] = -k[i];
      auto it = coeffs_.find(mk);
      const Matrix Fm = (it == coeffs_.end()) ? Matrix::zero(r_, r_) : it->second;
      if ((Fm - F.adjoint()).max_abs() > eps * (1.0 + F.max_abs())) return false;
    }
    return true;
  }

  // sum_k F_k e^{i k.theta}
  Matrix eval(const std::vector<double>& theta) const {
    if (int(theta.size()) != d_) throw InvalidParameterError("TrigPolynomial::eval: theta length != d");
    Matrix out(r_, r_);
    for (const auto& [k, F] : coeffs_) {
      double ang = 0.0;
      for (int i = 0; i < d_; ++i) ang += k[i] * theta[i];
      const cdouble w(std::cos(ang), std::sin(ang));
      for (int i = 0; i < r_; ++i)
        for (int j = 0; j < r_; ++j) out(i, j) += w * F(i, j);
    }
    return out;
  }

 private:
  int d_, r_;
  std::map<std::vector<int>, Matrix> coeffs_;
};

inline Matrix eval_trig(const TrigPolynomial& p, const std::vector<double>& theta) {
  return p.eval(theta);
}

}  // namespace gltlab
