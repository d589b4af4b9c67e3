#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "cwlab/eigensolve.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace cwlab;

namespace {

double golden() { return (1.0 + std::sqrt(5.0)) / 2.0; }

}  // namespace

TEST(Eigensolve, ThreeByThreeAnalytic) {
  const double h = std::sqrt(2.0) / 2.0;
  const TridiagonalMatrix m({-1.0, 0.0, -1.0}, {-h, -h});
  const auto s = eig_full(m);
  // characteristic polynomial (l+1)(l^2 + l - 1) = 0
  EXPECT_NEAR(s.values[0], -golden(), 1e-14);
  EXPECT_NEAR(s.values[1], -1.0, 1e-14);
  EXPECT_NEAR(s.values[2], golden() - 1.0, 1e-14);
}

TEST(Eigensolve, SwapMatrix) {
  const auto s = eig_full(TridiagonalMatrix({0.0, 0.0}, {1.0}));
  EXPECT_NEAR(s.values[0], -1.0, 1e-15);
  EXPECT_NEAR(s.values[1], 1.0, 1e-15);
}

TEST(Eigensolve, ConstantDiagonalNoCoupling) {
  const TridiagonalMatrix m(std::vector<double>(7, 2.5), std::vector<double>(6, 0.0));
  const auto s = eig_full(m);
  for (double v : s.values) EXPECT_EQ(v, 2.5);
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) EXPECT_NEAR(detail::dot(s.vectors[i], s.vectors[j]), 0.0, 1e-12);
}

TEST(Eigensolve, SizeOne) {
  const auto s = eig_full(TridiagonalMatrix({-3.25}, {}));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.values[0], -3.25);
  EXPECT_EQ(s.vectors[0][0], 1.0);
}

TEST(Eigensolve, ToeplitzClosedForm) {
  for (int M : {2, 5, 33, 200}) {
    const double b = 0.3, a = -0.7;
    const TridiagonalMatrix m(std::vector<double>(M, b), std::vector<double>(M - 1, a));
    const auto want = oracle::toeplitz_eigenvalues(b, a, M);
    const auto got = eig_full(m, false).values;
    for (int j = 0; j < M; ++j) EXPECT_NEAR(got[j], want[j], 1e-13) << "M=" << M << " j=" << j;
  }
}

TEST(Eigensolve, AgreesWithJacobiIncludingVectors) {
  gen::Rng rng(7);
  for (int t = 0; t < 10; ++t) {
    const auto m = rng.tridiagonal(25);
    const std::vector<double> d(m.diag().begin(), m.diag().end()), e(m.off().begin(), m.off().end());
    const auto ref = oracle::jacobi(oracle::tridiag_dense(d, e));
    const auto s = eig_full(m);
    for (std::size_t i = 0; i < s.size(); ++i) {
      EXPECT_NEAR(s.values[i], ref.values[i], 1e-11);
      EXPECT_LE(s.residuals[i], kResidualTol * (std::abs(s.values[i]) + m.norm()));
    }
  }
}

TEST(Eigensolve, LowestKAndErrors) {
  const auto m = build_tridiag_cw({30, 0.5});
  const auto all = eig_full(m, false).values;
  const auto low = eigenvalues_lowest(m, 4);
  ASSERT_EQ(low.size(), 4u);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(low[i], all[i]);
  EXPECT_THROW(eig_lowest(m, 0, false), ParameterError);
  EXPECT_THROW(eig_lowest(m, 32, false), ParameterError);
}

TEST(Eigensolve, SturmCountBrackets) {
  const auto m = build_tridiag_cw({2, 0.5});
  EXPECT_EQ(sturm_count(m, -10.0), 0u);
  EXPECT_EQ(sturm_count(m, -1.5), 1u);
  EXPECT_EQ(sturm_count(m, 0.0), 2u);
  EXPECT_EQ(sturm_count(m, 10.0), 3u);
}

TEST(Eigensolve, SignConvention) {
  std::vector<double> v{0.1, -0.9, 0.3};
  apply_sign_convention(v);
  EXPECT_GT(v[1], 0.0);
  std::vector<double> w{-0.5, 0.5};
  apply_sign_convention(w);
  EXPECT_GT(w[0], 0.0);
}

TEST(Eigensolve, SymmetrizedPolicyGivesParityVectors) {
  const int N = 200;
  const auto m = scale(build_tridiag_cw({N, 0.5}), 1.0 / N);
  const auto s = eig_lowest(m, 4, true, ClusterPolicy::symmetrized);
  for (std::size_t j = 0; j < 4; ++j) {
    const auto& v = s.vectors[j];
    const double sign = j % 2 == 0 ? 1.0 : -1.0;
    for (int i = 0; i <= N; ++i) EXPECT_EQ(v[i], sign * v[N - i]) << "vector " << j;
  }
}

TEST(Eigensolve, RawPolicyStillOrthonormalOnDegeneratePairs) {
  const int N = 400;
  const auto m = scale(build_tridiag_cw({N, 0.5}), 1.0 / N);
  const auto s = eig_lowest(m, 6, true, ClusterPolicy::raw);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_NEAR(detail::norm2(s.vectors[i]), 1.0, 1e-12);
    for (std::size_t j = 0; j < i; ++j) EXPECT_LE(std::abs(detail::dot(s.vectors[i], s.vectors[j])), 1e-10);
  }
}

TEST(Eigensolve, SplittingAndClusters) {
  EXPECT_EQ(splitting(TridiagonalMatrix({1.0, 1.0}, {0.0})), 0.0);
  EXPECT_THROW(splitting(TridiagonalMatrix({1.0}, {})), ParameterError);
  const std::vector<double> vals{0.0, 1e-16, 1.0, 2.0, 2.0, 2.0};
  const auto c = degenerate_clusters(vals, 1e-12);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0], (std::pair<std::size_t, std::size_t>{0, 1}));
  EXPECT_EQ(c[1], (std::pair<std::size_t, std::size_t>{3, 5}));
}

TEST(Eigensolve, PolicyParsing) {
  EXPECT_EQ(parse_policy("raw"), ClusterPolicy::raw);
  EXPECT_EQ(parse_policy("symmetrized"), ClusterPolicy::symmetrized);
  EXPECT_THROW(parse_policy("other"), ParameterError);
}
