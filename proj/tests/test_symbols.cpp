#include <catch2/catch_amalgamated.hpp>

#include "gltlab/symbols.hpp"
#include "test_helpers.hpp"

using namespace gltlab;
using gltlab::testing::rel_diff;

namespace {

Matrix diag2(double a, double b) { return diag(std::vector<double>{a, b}); }

GridSymbol grid_from_scalars(const std::vector<double>& vals) {
  GridSymbol g;
  g.d = 1;
  g.r = 1;
  g.m_x = {1};
  g.m_theta = {int(vals.size())};
  for (double v : vals) {
    Matrix M(1, 1);
    M(0, 0) = v;
    g.values.push_back(M);
  }
  return g;
}

}  // namespace

TEST_CASE("sample_symbol: pinned examples") {
  Matrix C(2, 2);
  C(0, 0) = 1.0; C(0, 1) = cdouble(0, 1); C(1, 0) = cdouble(0, -1); C(1, 1) = 3.0;
  GridSymbol g = sample_symbol(SymbolFn::constant(C), {3}, {4});
  REQUIRE(g.node_count() == 12);
  for (const Matrix& v : g.values) REQUIRE(rel_diff(v, C) == 0.0);

  SymbolFn fx = SymbolFn::scalar([](double x, double) { return x; });
  GridSymbol gx = sample_symbol(fx, {2}, {1});
  REQUIRE(gx.values.size() == 2);
  REQUIRE_THAT(gx.values[0](0, 0).real(), Catch::Matchers::WithinAbs(0.25, 1e-15));
  REQUIRE_THAT(gx.values[1](0, 0).real(), Catch::Matchers::WithinAbs(0.75, 1e-15));

  SymbolFn ft = SymbolFn::scalar([](double, double t) { return 2.0 - 2.0 * std::cos(t); });
  GridSymbol gt = sample_symbol(ft, {1}, {2});
  REQUIRE_THAT(gt.values[0](0, 0).real(), Catch::Matchers::WithinAbs(2.0, 1e-14));
  REQUIRE_THAT(gt.values[1](0, 0).real(), Catch::Matchers::WithinAbs(2.0, 1e-14));
}

TEST_CASE("sample_symbol: default grid lands near 2000 nodes") {
  SymbolFn f = SymbolFn::scalar([](double x, double t) { return x + std::cos(t); });
  GridSymbol g = sample_symbol(f);
  REQUIRE(g.node_count() >= 1500);
  REQUIRE(g.node_count() <= 2600);
}

TEST_CASE("sample_symbol: rejects non-Hermitian blocks") {
  SymbolFn bad;
  bad.r = 2;
  bad.eval = [](const std::vector<double>&, const std::vector<double>&) {
    Matrix M(2, 2);
    M(0, 1) = 1.0;  // not Hermitian
    return M;
  };
  REQUIRE_THROWS_AS(sample_symbol(bad, {2}, {2}), InvalidInputError);
}

TEST_CASE("rearrange: pinned examples") {
  GridSymbol g;
  g.d = 1; g.r = 2; g.m_x = {1}; g.m_theta = {2};
  g.values = {diag2(1, 3), diag2(1, 3)};
  REQUIRE(rearrange(g) == std::vector<double>{1, 1, 3, 3});

  REQUIRE(rearrange(grid_from_scalars({2, 0, 1})) == std::vector<double>{0, 1, 2});

  g.values = {diag2(0, 5), diag2(2, 2)};
  REQUIRE(rearrange(g) == std::vector<double>{0, 2, 2, 5});
}

TEST_CASE("rearrange: preserves eigenvalue sums (permutation of the multiset)") {
  SymbolFn f;
  f.r = 2;
  f.eval = [](const std::vector<double>& x, const std::vector<double>& th) {
    Matrix M(2, 2);
    M(0, 0) = 2.0 + x[0];
    M(1, 1) = std::cos(th[0]);
    M(0, 1) = cdouble(0.3, 0.1 * x[0]);
    M(1, 0) = std::conj(M(0, 1));
    return M;
  };
  GridSymbol g = sample_symbol(f, {9}, {11});
  auto q = rearrange(g);
  double s1 = 0.0, s2 = 0.0;
  for (double v : q) {
    s1 += v;
    s2 += v * v;
  }
  double t1 = 0.0, t2 = 0.0;
  for (const Matrix& v : g.values)
    for (double l : hermitian_eigenvalues(v)) {
      t1 += l;
      t2 += l * l;
    }
  REQUIRE_THAT(s1, Catch::Matchers::WithinRel(t1, 1e-9));
  REQUIRE_THAT(s2, Catch::Matchers::WithinRel(t2, 1e-9));
}

TEST_CASE("geometric_mean_symbol: pinned examples") {
  SymbolFn k = SymbolFn::scalar([](double, double) { return 4.0; });
  SymbolFn x = SymbolFn::scalar([](double, double) { return 9.0; });
  SymbolFn g = geometric_mean_symbol(k, x);
  REQUIRE_THAT(g.eval({0.5}, {0.0})(0, 0).real(), Catch::Matchers::WithinAbs(6.0, 1e-12));

  SymbolFn kk = SymbolFn::constant(diag2(1, 4));
  REQUIRE(rel_diff(geometric_mean_symbol(kk, kk).eval({0.1}, {0.2}), diag2(1, 4)) < 1e-10);

  SymbolFn xx = SymbolFn::constant(diag2(9, 16));
  REQUIRE(rel_diff(geometric_mean_symbol(kk, xx).eval({0.1}, {0.2}), diag2(3, 8)) < 1e-10);

  SymbolFn sing = SymbolFn::constant(diag2(1, 0));
  REQUIRE_THROWS_AS(geometric_mean_symbol(sing, xx).eval({0.1}, {0.2}), DomainError);
}

TEST_CASE("geometric_mean_symbol: permutation invariance and commuting consistency") {
  SymbolFn k;
  k.r = 2;
  k.eval = [](const std::vector<double>& x, const std::vector<double>& th) {
    Matrix M = diag2(1.0 + x[0], 2.0 + std::cos(th[0]));
    M(0, 1) = 0.4;
    M(1, 0) = 0.4;
    return M;
  };
  SymbolFn x = SymbolFn::constant(diag2(2.0, 3.0) + Matrix::identity(2));
  SymbolFn g1 = geometric_mean_symbol(k, x);
  SymbolFn g2 = geometric_mean_symbol(x, k);
  REQUIRE(rel_diff(g1.eval({0.3}, {1.1}), g2.eval({0.3}, {1.1})) < 1e-9);

  // commuting: diagonal values
  SymbolFn dk = SymbolFn::constant(diag2(1.0, 4.0));
  SymbolFn dx = SymbolFn::constant(diag2(9.0, 16.0));
  Matrix lhs = geometric_mean_symbol(dk, dx).eval({0.2}, {0.3});
  Matrix rhs = hpd_sqrt((diag2(1, 4) * diag2(9, 16)).hermitized());
  REQUIRE(rel_diff(lhs, rhs) < 1e-8);
}

TEST_CASE("candidate_symbol: zero symbols give (near) zero grid") {
  SymbolFn z = SymbolFn::constant(Matrix::zero(1, 1));
  GridSymbol g = candidate_symbol(z, z, {2}, {2});
  for (long i = 0; i < g.node_count(); ++i) {
    REQUIRE(g.converged[i] == 1);
    REQUIRE(g.values[i].max_abs() < 1e-6);
  }
}

TEST_CASE("candidate_symbol: overlap block of Case 1 Example 2") {
  // On the overlap both indicators are 1, so the limit is the plain mean
  // of the blocks; its closed form has lambda_max 2.9939.
  Matrix A(2, 2), B(2, 2);
  A(0, 0) = 2; A(0, 1) = 1; A(1, 0) = 1; A(1, 1) = 2;
  B(0, 0) = 3; B(0, 1) = 1; B(1, 0) = 1; B(1, 1) = 1;
  const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0), s6 = std::sqrt(6.0);
  Matrix C(2, 2);
  C(0, 0) = 2 * s2 + 3 * s3;
  C(0, 1) = s2 + s3;
  C(1, 0) = s2 + s3;
  C(1, 1) = 2 * s2 + s3;
  C *= cdouble(1.0 / (std::pow(6.0, 0.25) * std::sqrt(2.0 + s6)));

  GridSymbol g = candidate_symbol(SymbolFn::constant(A), SymbolFn::constant(B), {1}, {1});
  REQUIRE(g.converged[0] == 1);
  REQUIRE(rel_diff(g.values[0], C) < 1e-5);
  auto ev = hermitian_eigenvalues(g.values[0]);
  REQUIRE_THAT(ev.back(), Catch::Matchers::WithinAbs(2.9939, 5e-4));
}

TEST_CASE("candidate_symbol: crossing kernels converge to zero slowly (flagged)") {
  GridSymbol g = candidate_symbol(SymbolFn::constant(diag2(1, 0)), SymbolFn::constant(diag2(0, 1)),
                                  {1}, {1});
  // The limit is the zero matrix but the sqrt(eps) rate cannot stabilize to
  // 1e-6 within the default ladder: value = last iterate, flag cleared.
  REQUIRE(g.converged[0] == 0);
  REQUIRE(g.values[0].max_abs() < 1e-3);
}

TEST_CASE("candidate_symbol: agrees with geometric_mean_symbol on HPD symbols") {
  SymbolFn k = SymbolFn::scalar([](double x, double) { return 1.0 + x; });
  SymbolFn x = SymbolFn::scalar([](double, double t) { return 3.0 + std::cos(t); });
  GridSymbol cand = candidate_symbol(k, x, {4}, {4});
  GridSymbol direct = sample_symbol(geometric_mean_symbol(k, x), {4}, {4});
  for (long i = 0; i < cand.node_count(); ++i) {
    REQUIRE(cand.converged[i] == 1);
    REQUIRE((cand.values[i] - direct.values[i]).max_abs() < tol::candidate_stab);
  }
}

TEST_CASE("sample_symbol: worker count does not change the result") {
  SymbolFn f = SymbolFn::scalar([](double x, double t) { return x * x + std::cos(t); });
  setenv("GLT_LAB_THREADS", "3", 1);
  GridSymbol g3 = sample_symbol(f, {7}, {9});
  setenv("GLT_LAB_THREADS", "1", 1);
  GridSymbol g1 = sample_symbol(f, {7}, {9});
  unsetenv("GLT_LAB_THREADS");
  REQUIRE(g1.node_count() == g3.node_count());
  for (long i = 0; i < g1.node_count(); ++i)
    REQUIRE(g1.values[i](0, 0) == g3.values[i](0, 0));
}

TEST_CASE("candidate_symbol: validates the epsilon ladder") {
  SymbolFn z = SymbolFn::constant(Matrix::zero(1, 1));
  REQUIRE_THROWS_AS(candidate_symbol(z, z, {1}, {1}, {}), InvalidParameterError);
  REQUIRE_THROWS_AS(candidate_symbol(z, z, {1}, {1}, {1e-2, 1e-1}), InvalidParameterError);
}
