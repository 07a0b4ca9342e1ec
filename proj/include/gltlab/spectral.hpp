#pragma once

#include <string>

#include "gltlab/symbols.hpp"

namespace gltlab {

// A rule n -> matrix plus the sizes to sweep; sizes strictly increasing.
struct SequenceSpec {
  std::string builder_id;
  std::function<Matrix(long)> build;
  std::vector<long> sizes;

  void validate() const {
    if (!build) throw InvalidParameterError("SequenceSpec: missing builder");
    if (sizes.empty()) throw InvalidParameterError("SequenceSpec: empty size list");
    for (size_t i = 1; i < sizes.size(); ++i)
      if (sizes[i] <= sizes[i - 1])
        throw InvalidParameterError("SequenceSpec: sizes must be strictly increasing");
  }
};

struct SpectralReport {
  long n = 0;  // size parameter used to build the matrix
  std::vector<double> sorted_eigenvalues;
  std::vector<double> symbol_quantiles;  // resampled to matrix order
  double sup_distance = 0.0;
  double l1_distance = 0.0;
  double lambda_min = 0.0, lambda_max = 0.0;
  double below_threshold_fraction = 0.0;
  double threshold = 0.1;
};

// Nearest-rank resampling of the nondecreasing rearrangement to m points:
// q_i = Q(ceil(t_i * len)) with t_i = i/m, i = 1..m.
inline std::vector<double> resample_quantiles(const std::vector<double>& q, long m) {
  std::vector<double> out(m);
  const long len = long(q.size());
  for (long i = 1; i <= m; ++i) {
    long idx = (i * len + m - 1) / m;  // ceil(i*len/m)
    idx = std::min(std::max(idx, 1L), len);
    out[i - 1] = q[idx - 1];
  }
  return out;
}

// Sorted eigenvalues of A against the rearranged quantiles of g.
inline SpectralReport compare_distribution(const Matrix& A, const GridSymbol& g,
                                           double threshold = 0.1) {
  require_hermitian(A, "compare_distribution");
  SpectralReport rep;
  rep.n = A.rows();
  rep.threshold = threshold;
  rep.sorted_eigenvalues = hermitian_eigenvalues(A);
  rep.symbol_quantiles = resample_quantiles(rearrange(g), A.rows());
  rep.lambda_min = rep.sorted_eigenvalues.front();
  rep.lambda_max = rep.sorted_eigenvalues.back();
  double sup = 0.0, l1 = 0.0;
  long below = 0;
  for (size_t i = 0; i < rep.sorted_eigenvalues.size(); ++i) {
    const double d = std::abs(rep.sorted_eigenvalues[i] - rep.symbol_quantiles[i]);
    sup = std::max(sup, d);
    l1 += d;
    if (std::abs(rep.sorted_eigenvalues[i]) <= threshold) ++below;
  }
  rep.sup_distance = sup;
  rep.l1_distance = l1 / double(rep.sorted_eigenvalues.size());
  rep.below_threshold_fraction = double(below) / double(rep.sorted_eigenvalues.size());
  return rep;
}

// sup distance ignoring the k worst deviations ("trimmed" variant; outliers
// are expected in small batches).
inline double sup_distance_trimmed(const SpectralReport& rep, int k) {
  std::vector<double> devs(rep.sorted_eigenvalues.size());
  for (size_t i = 0; i < devs.size(); ++i)
    devs[i] = std::abs(rep.sorted_eigenvalues[i] - rep.symbol_quantiles[i]);
  std::sort(devs.begin(), devs.end());
  if (k >= int(devs.size())) return 0.0;
  return devs[devs.size() - 1 - k];
}

struct ZeroDistributionReport {
  std::vector<long> sizes;
  std::vector<double> values;  // ||A_n||_p / d_n^{1/p}
  bool decreasing = false;     // strictly decreasing across the size list
};

// Normalized Schatten statistic per size; vanishing values indicate a
// zero-distributed sequence.
inline ZeroDistributionReport zero_distribution_test(const SequenceSpec& spec, double p) {
  spec.validate();
  if (p < 1.0) throw InvalidParameterError("zero_distribution_test: p must be >= 1");
  ZeroDistributionReport rep;
  rep.sizes = spec.sizes;
  for (long n : spec.sizes) {
    const Matrix A = spec.build(n);
    const double dn = double(A.rows());
    const double denom = std::isinf(p) ? 1.0 : std::pow(dn, 1.0 / p);
    rep.values.push_back(schatten_norm(A, p) / denom);
  }
  rep.decreasing = true;
  for (size_t i = 1; i < rep.values.size(); ++i)
    if (!(rep.values[i] < rep.values[i - 1])) rep.decreasing = false;
  return rep;
}

enum class DecayLog { base2, natural, base10 };
enum class ExtremalSide { min, max };

struct DecayRow {
  long n = 0;
  double lambda = 0.0;  // extremal eigenvalue
  double tau = 0.0;     // distance to the reference
  double alpha = 0.0;   // log ratio to the next size; NaN on the last row
  bool flagged = false; // tau <= 0: reference is not a true bound here
};

struct DecayTable {
  ExtremalSide side = ExtremalSide::min;
  double reference = 0.0;
  DecayLog log_mode = DecayLog::base2;
  std::vector<DecayRow> rows;
};

inline double decay_log(DecayLog mode, double ratio) {
  switch (mode) {
    case DecayLog::base2: return std::log2(ratio);
    case DecayLog::natural: return std::log(ratio);
    case DecayLog::base10: return std::log10(ratio);
  }
  return std::log2(ratio);
}

// tau_j = lambda_min(X_{n_j}) - reference (or reference - lambda_max) and the
// fitted per-step exponents alpha_j = log(tau_j / tau_{j+1}).
inline DecayTable extremal_decay(const SequenceSpec& spec, double reference, ExtremalSide side,
                                 DecayLog log_mode = DecayLog::base2) {
  spec.validate();
  if (spec.sizes.size() < 2)
    throw InvalidParameterError("extremal_decay: need at least two sizes");
  DecayTable table;
  table.side = side;
  table.reference = reference;
  table.log_mode = log_mode;
  for (long n : spec.sizes) {
    const Matrix A = spec.build(n);
    const auto ev = hermitian_eigenvalues(A);
    DecayRow row;
    row.n = n;
    row.lambda = (side == ExtremalSide::min) ? ev.front() : ev.back();
    row.tau = (side == ExtremalSide::min) ? row.lambda - reference : reference - row.lambda;
    row.flagged = !(row.tau > 0.0);
    row.alpha = std::numeric_limits<double>::quiet_NaN();
    table.rows.push_back(row);
  }
  for (size_t j = 0; j + 1 < table.rows.size(); ++j) {
    if (table.rows[j].flagged || table.rows[j + 1].flagged) continue;
    table.rows[j].alpha = decay_log(log_mode, table.rows[j].tau / table.rows[j + 1].tau);
  }
  return table;
}

struct PerturbationReport {
  SpectralReport report;  // distribution of the Hermitian part of B + C
  double c_norm = 0.0;    // spectral norm of the perturbation
};

// Distribution of B + C (Hermitian part) against g, with the perturbation
// norm recorded; supports small-norm perturbation checks.
inline PerturbationReport small_norm_perturbation_check(const Matrix& B, const Matrix& C,
                                                        const GridSymbol& g,
                                                        double threshold = 0.1) {
  PerturbationReport rep;
  rep.c_norm = spectral_norm(C);
  const Matrix H = (B + C).hermitized();
  rep.report = compare_distribution(H, g, threshold);
  return rep;
}

}  // namespace gltlab
