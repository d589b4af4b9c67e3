#include <cmath>

#include <gtest/gtest.h>

#include "cwlab/eigensolve.hpp"
#include "cwlab/spin_exact.hpp"
#include "support/oracles.hpp"

using namespace cwlab;

TEST(Dense, SingleSite) {
  const auto h = build_dense_cw({1, 0.5});
  ASSERT_EQ(h.dim, 2u);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_DOUBLE_EQ(h(i, j), -0.5);
}

TEST(Dense, TwoSiteDiagonal) {
  const auto h = build_dense_cw({2, 0.5});
  EXPECT_DOUBLE_EQ(h(0, 0), -1.0);
  EXPECT_DOUBLE_EQ(h(1, 1), 0.0);
  EXPECT_DOUBLE_EQ(h(2, 2), 0.0);
  EXPECT_DOUBLE_EQ(h(3, 3), -1.0);
}

TEST(Dense, ZeroFieldIsDiagonal) {
  const auto h = build_dense_cw({2, 0.0});
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (i != j) EXPECT_EQ(h(i, j), 0.0);
}

TEST(Dense, CapacityLimit) {
  EXPECT_THROW(build_dense_cw({kMaxDenseN + 1, 0.5}), CapacityError);
  EXPECT_THROW(SymmetricSubspaceMap(0), CapacityError);
}

TEST(Symmetrizer, LiftExamples) {
  SymmetricSubspaceMap map(2);
  const auto a = symmetrize_lift(std::vector<double>{1, 0, 0}, map);
  EXPECT_EQ(a, (std::vector<double>{1, 0, 0, 0}));
  const auto b = symmetrize_lift(std::vector<double>{0, 1, 0}, map);
  const double s = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(b[0], 0.0, 0.0);
  EXPECT_NEAR(b[1], s, 1e-15);
  EXPECT_NEAR(b[2], s, 1e-15);
  EXPECT_NEAR(b[3], 0.0, 0.0);
  EXPECT_THROW(symmetrize_lift(std::vector<double>{1, 0}, map), DimensionError);
}

TEST(Symmetrizer, ProjectExamples) {
  SymmetricSubspaceMap map(2);
  const auto c = project_symmetric(std::vector<double>{0, 1, 0, 0}, map);
  EXPECT_NEAR(c[0], 0.0, 0.0);
  EXPECT_NEAR(c[1], 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(c[2], 0.0, 0.0);
  const auto z = project_symmetric(std::vector<double>{0, 1, -1, 0}, map);
  for (double x : z) EXPECT_NEAR(x, 0.0, 1e-16);
  EXPECT_NEAR(symmetric_defect(std::vector<double>{0, 1, -1, 0}, map), std::sqrt(2.0), 1e-15);
  EXPECT_THROW(project_symmetric(std::vector<double>{1, 2, 3}, map), DimensionError);
}

TEST(Checks, NonnegativityWithAndWithoutFlea) {
  EXPECT_TRUE(check_offdiag_nonnegative(build_dense_cw({4, 0.5})).ok);
  ModelParams p{4, 0.5};
  p.flea = FleaParams{0.75, 0.2, 0.4};
  EXPECT_TRUE(check_offdiag_nonnegative(build_dense_cw(p)).ok);
  auto h = build_dense_cw({3, 0.5});
  h.at(1, 2) = 0.25;  // -h(1,2) < 0
  const auto r = check_offdiag_nonnegative(h);
  EXPECT_FALSE(r.ok);
  ASSERT_TRUE(r.first_violation.has_value());
  const auto [i, j] = *r.first_violation;
  EXPECT_TRUE((i == 1 && j == 2) || (i == 2 && j == 1));
  EXPECT_EQ(r.value, -0.25);
}

TEST(Checks, Irreducibility) {
  EXPECT_TRUE(check_irreducible(build_dense_cw({3, 0.5})));
  EXPECT_FALSE(check_irreducible(build_dense_cw({3, 0.0})));
  DenseHamiltonian one{1, {2.0}, {}};
  EXPECT_TRUE(check_irreducible(one));
}

TEST(DenseEig, TwoSitesMatchesTridiagonalAndJacobi) {
  const auto h = build_dense_cw({2, 0.5});
  const auto s = dense_eig(h);
  oracle::Matrix a(4, std::vector<double>(4));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) a[i][j] = h(i, j);
  const auto ref = oracle::jacobi(a);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(s.values[i], ref.values[i], 1e-13);
  const double lowest_tridiag = eig_lowest(build_tridiag_cw({2, 0.5}), 1, false).values[0];
  EXPECT_NEAR(s.values[0], -(1.0 + std::sqrt(5.0)) / 2.0, 1e-12);
  EXPECT_NEAR(s.values[0], lowest_tridiag, 1e-12);
}

TEST(DenseEig, SymmetricSectorEqualsTridiagonalSpectrum) {
  for (int N : {3, 6, 8}) {
    const auto h = build_dense_cw({N, 0.7});
    const auto s = dense_eig(h);
    for (double r : s.residuals) EXPECT_LE(r, 1e-11);
    SymmetricSubspaceMap map(N);
    const auto sym = symmetric_sector_spectrum(s, map, 1e-8);
    const auto tri = eig_full(build_tridiag_cw({N, 0.7}), false).values;
    ASSERT_EQ(sym.values.size(), tri.size()) << "N=" << N;
    for (std::size_t i = 0; i < tri.size(); ++i) EXPECT_NEAR(sym.values[i], tri[i], 1e-10);
  }
}

TEST(DenseEig, LowestSubsetAgreesWithFull) {
  const auto h = build_dense_cw({7, 0.5});
  const auto full = dense_eig(h);
  const auto low = dense_eig_lowest(h, 5);
  ASSERT_EQ(low.values.size(), 5u);
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(low.values[i], full.values[i], 1e-12);
}

TEST(PerronFrobenius, UnperturbedPasses) {
  const auto h = build_dense_cw({8, 0.5});
  const auto r = perron_frobenius_verify(h, dense_eig(h));
  EXPECT_TRUE(r.preconditions_met);
  EXPECT_TRUE(r.simple);
  EXPECT_TRUE(r.positive);
  EXPECT_TRUE(r.symmetric);
  EXPECT_TRUE(r.pass) << r.message;
}

TEST(PerronFrobenius, FleaAtTwelveSitesPasses) {
  ModelParams p{12, 0.5};
  p.flea = FleaParams{0.8, 0.05, 0.4};
  const auto h = build_dense_cw(p);
  const auto r = perron_frobenius_verify(h, dense_eig_lowest(h, 2));
  EXPECT_TRUE(r.pass) << r.message;
}

TEST(PerronFrobenius, ZeroFieldReportsPrecondition) {
  const auto h = build_dense_cw({4, 0.0});
  const auto r = perron_frobenius_verify(h, dense_eig(h));
  EXPECT_FALSE(r.preconditions_met);
  EXPECT_FALSE(r.pass);
  EXPECT_NE(r.message.find("reducible"), std::string::npos);
}
