#include <catch2/catch_amalgamated.hpp>

#include "gltlab/csv.hpp"
#include "gltlab/spectral.hpp"
#include "gltlab/structured.hpp"
#include "test_helpers.hpp"

using namespace gltlab;
using gltlab::testing::random_unitary;

namespace {
TrigPolynomial laplace1d() { return TrigPolynomial::scalar({{0, 2.0}, {1, -1.0}, {-1, -1.0}}); }
}

TEST_CASE("compare_distribution: constant symbol sampled exactly") {
  Matrix A = Matrix::identity(4) * 2.5;
  GridSymbol g = sample_symbol(SymbolFn::constant(Matrix::identity(1) * 2.5), {2}, {2});
  SpectralReport rep = compare_distribution(A, g);
  REQUIRE(rep.sup_distance == 0.0);
  REQUIRE(rep.l1_distance == 0.0);
  REQUIRE(rep.below_threshold_fraction == 0.0);
}

TEST_CASE("compare_distribution: T_40(2-2cos) against its symbol") {
  Matrix T = toeplitz(40, laplace1d());
  SymbolFn f = SymbolFn::scalar([](double, double t) { return 2.0 - 2.0 * std::cos(t); });
  SpectralReport rep = compare_distribution(T, sample_symbol(f, {40}, {50}));
  // eigenvalues are 2 - 2cos(j pi / 41); quantiles track them closely
  REQUIRE(rep.sup_distance < 0.25);
  REQUIRE_THAT(rep.lambda_min, Catch::Matchers::WithinAbs(2 - 2 * std::cos(M_PI / 41), 1e-12));
  REQUIRE_THAT(rep.lambda_max, Catch::Matchers::WithinAbs(2 - 2 * std::cos(40 * M_PI / 41), 1e-12));
}

TEST_CASE("compare_distribution: invariant under unitary conjugation") {
  Matrix T = toeplitz(24, laplace1d());
  Matrix U = random_unitary(24, 9);
  Matrix TU = (U.adjoint() * T * U).hermitized();
  SymbolFn f = SymbolFn::scalar([](double, double t) { return 2.0 - 2.0 * std::cos(t); });
  GridSymbol g = sample_symbol(f, {10}, {10});
  SpectralReport r1 = compare_distribution(T, g);
  SpectralReport r2 = compare_distribution(TU, g);
  for (size_t i = 0; i < r1.sorted_eigenvalues.size(); ++i)
    REQUIRE_THAT(r1.sorted_eigenvalues[i],
                 Catch::Matchers::WithinAbs(r2.sorted_eigenvalues[i], 1e-10));
}

TEST_CASE("compare_distribution: fraction monotone in threshold") {
  Matrix T = toeplitz(30, laplace1d());
  GridSymbol g = sample_symbol(SymbolFn::scalar([](double, double t) { return 2 - 2 * std::cos(t); }),
                               {6}, {6});
  double prev = 1.0;
  for (double thr : {2.0, 1.0, 0.5, 0.1, 0.01}) {
    const double frac = compare_distribution(T, g, thr).below_threshold_fraction;
    REQUIRE(frac <= prev);
    prev = frac;
  }
}

TEST_CASE("extreme eigenvalues of T_n(2-2cos) close in on the symbol range") {
  double prev_min = 1e9, prev_max = -1e9;
  for (long n : {20, 40, 80, 160}) {
    auto ev = hermitian_eigenvalues(toeplitz(int(n), laplace1d()));
    REQUIRE(ev.front() > 0.0);
    REQUIRE(ev.back() < 4.0);
    REQUIRE(ev.front() < prev_min);
    REQUIRE(ev.back() > prev_max);
    prev_min = ev.front();
    prev_max = ev.back();
  }
}

TEST_CASE("zero_distribution_test: pinned examples") {
  SequenceSpec shrink{"scaled identity",
                      [](long n) { return Matrix::identity(int(n)) * (1.0 / double(n)); },
                      {4, 8, 16}};
  auto rep = zero_distribution_test(shrink, std::numeric_limits<double>::infinity());
  REQUIRE(rep.decreasing);
  for (size_t i = 0; i < rep.sizes.size(); ++i)
    REQUIRE_THAT(rep.values[i], Catch::Matchers::WithinAbs(1.0 / double(rep.sizes[i]), 1e-12));

  SequenceSpec ident{"identity", [](long n) { return Matrix::identity(int(n)); }, {4, 8, 16}};
  auto rep1 = zero_distribution_test(ident, 1.0);
  REQUIRE(!rep1.decreasing);
  for (double v : rep1.values) REQUIRE_THAT(v, Catch::Matchers::WithinAbs(1.0, 1e-12));

  REQUIRE_THROWS_AS(zero_distribution_test(ident, 0.5), InvalidParameterError);
}

TEST_CASE("extremal_decay: alpha tends to 4 for T_n((2-2cos)^2)") {
  TrigPolynomial penta =
      TrigPolynomial::scalar({{0, 6.0}, {1, -4.0}, {-1, -4.0}, {2, 1.0}, {-2, 1.0}});
  SequenceSpec spec{"T_n((2-2cos)^2)", [&](long n) { return toeplitz(int(n), penta); },
                    {40, 80, 160, 320}};
  DecayTable t = extremal_decay(spec, 0.0, ExtremalSide::min);
  REQUIRE(t.rows.size() == 4);
  REQUIRE(!t.rows[0].flagged);
  REQUIRE(std::isnan(t.rows[3].alpha));
  REQUIRE_THAT(t.rows[2].alpha, Catch::Matchers::WithinAbs(4.0, 0.15));
}

TEST_CASE("extremal_decay: flagged rows when the reference is not a bound") {
  SequenceSpec spec{"identity", [](long n) { return Matrix::identity(int(n)); }, {4, 8}};
  DecayTable t = extremal_decay(spec, 2.0, ExtremalSide::min);  // lambda - 2 < 0
  REQUIRE(t.rows[0].flagged);
  REQUIRE(std::isnan(t.rows[0].alpha));

  DecayTable tn = extremal_decay(spec, 0.5, ExtremalSide::min, DecayLog::natural);
  REQUIRE_THAT(tn.rows[0].alpha, Catch::Matchers::WithinAbs(0.0, 1e-12));  // tau constant
}

TEST_CASE("small_norm_perturbation_check: pinned behaviors") {
  Matrix T = toeplitz(24, laplace1d());
  GridSymbol g = sample_symbol(SymbolFn::scalar([](double, double t) { return 2 - 2 * std::cos(t); }),
                               {10}, {10});
  SpectralReport base = compare_distribution(T, g);

  PerturbationReport r0 = small_norm_perturbation_check(T, Matrix::zero(24, 24), g);
  REQUIRE(r0.c_norm == 0.0);
  REQUIRE(r0.report.sup_distance == base.sup_distance);

  Matrix C = Matrix::identity(24) * (1.0 / 24.0);
  PerturbationReport r1 = small_norm_perturbation_check(T, C, g);
  REQUIRE(std::abs(r1.report.sup_distance - base.sup_distance) <= 1.0 / 24.0 + 1e-12);

  // skew-Hermitian perturbation: Hermitian part untouched
  Matrix S(24, 24);
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 24; ++i)
    for (int j = i + 1; j < 24; ++j) {
      const cdouble v{u(gen), u(gen)};
      S(i, j) = v;
      S(j, i) = -std::conj(v);
    }
  S *= cdouble(1e-3 / spectral_norm(S));
  PerturbationReport r2 = small_norm_perturbation_check(T, S, g);
  REQUIRE_THAT(r2.c_norm, Catch::Matchers::WithinAbs(1e-3, 1e-9));
  REQUIRE_THAT(r2.report.sup_distance, Catch::Matchers::WithinAbs(base.sup_distance, 1e-12));
}

TEST_CASE("resample_quantiles: nearest-rank indexing") {
  std::vector<double> q = {1, 2, 3, 4, 5, 6};
  REQUIRE(resample_quantiles(q, 3) == std::vector<double>{2, 4, 6});
  REQUIRE(resample_quantiles(q, 6) == q);
  REQUIRE(resample_quantiles(q, 12) == std::vector<double>{1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 6, 6});
}

TEST_CASE("csv: matrix round-trip is exact") {
  Matrix M = gltlab::testing::random_matrix(7, 123);
  std::stringstream ss;
  write_matrix_csv(M, ss);
  Matrix R = read_matrix_csv(ss);
  REQUIRE(R.rows() == 7);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) REQUIRE(M(i, j) == R(i, j));
}

TEST_CASE("csv: grid symbol round-trip preserves blocks and rearrangement") {
  SymbolFn f;
  f.r = 2;
  f.eval = [](const std::vector<double>& x, const std::vector<double>& th) {
    Matrix M(2, 2);
    M(0, 0) = x[0];
    M(1, 1) = std::cos(th[0]);
    M(0, 1) = cdouble(0.2, 0.1);
    M(1, 0) = std::conj(M(0, 1));
    return M;
  };
  GridSymbol g = sample_symbol(f, {3}, {4});
  std::stringstream ss;
  write_grid_symbol_csv(g, ss);
  GridSymbol r = read_grid_symbol_csv(ss);
  REQUIRE(r.d == 1);
  REQUIRE(r.r == 2);
  REQUIRE(r.node_count() == g.node_count());
  auto q1 = rearrange(g), q2 = rearrange(r);
  for (size_t i = 0; i < q1.size(); ++i) REQUIRE(q1[i] == q2[i]);
}
