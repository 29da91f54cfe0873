#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "causaldir/classify.hpp"
#include "causaldir/monotonicity.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace causaldir;

using causaldir::testing::Table;

TEST(Gradient, HandDifferences) {
  Eigen::Matrix3d m;
  m.col(0) << 0, 0.1, 0.4;
  m.col(1) << 0, 0.1, 0.4;
  m.col(2) << 0, 0.1, 0.4;
  const auto g = gradient_field(GridDistribution<double>{m}, GradientAxis::X);
  EXPECT_NEAR(g.values(0, 0), 0.1, 1e-16);
  EXPECT_NEAR(g.values(1, 0), 0.2, 1e-16);
  EXPECT_NEAR(g.values(2, 0), 0.3, 1e-16);
  const auto gy = gradient_field(GridDistribution<double>{m}, GradientAxis::Y);
  EXPECT_TRUE(gy.values.isZero());
}

TEST(Gradient, TransposeEquivariance) {
  std::mt19937_64 rng(1);
  const auto p = causaldir::testing::random_grid(rng, 7);
  const auto a = gradient_field(transpose(p), GradientAxis::X);
  const auto b = gradient_field(p, GradientAxis::Y);
  EXPECT_EQ(a.values, b.values.transpose());
}

TEST(Monotonicity, MonotoneFieldHasZeroIndex) {
  GridMatrix<double> m(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) m(i, j) = 1.0 + i + 0.5 * j + 0.1 * i * j;
  const GridDistribution<double> p{m / m.sum()};
  for (auto reg : {Regularization::Weighted, Regularization::Zone}) {
    const auto r = monotonicity_indexes(p, reg, std::optional<double>(1e-11));
    EXPECT_EQ(r.mi_x, 0.0);
    EXPECT_EQ(r.mi_y, 0.0);
  }
}

TEST(Monotonicity, SymmetricFieldTies) {
  std::mt19937_64 rng(6);
  auto p = causaldir::testing::random_grid(rng, 9);
  p.mass = 0.5 * (p.mass + p.mass.transpose()).eval();
  const auto r = monotonicity_indexes(p, Regularization::Weighted);
  EXPECT_NEAR(r.mi_x, r.mi_y, 1e-12);
  EXPECT_EQ(monotonicity_decide(r).direction, Direction::Undecided);
}

TEST(Monotonicity, AlternatingLineCountsThreeChanges) {
  GridMatrix<double> g(4, 1);
  g << 0.2, -0.1, 0.4, -0.3;
  GridVector<double> phi = GridVector<double>::Constant(4, 0.25);
  const double expected = 0.25 * 0.5 * (0.2 + 0.1) + 0.25 * 0.5 * (0.1 + 0.4) + 0.25 * 0.5 * (0.4 + 0.3);
  EXPECT_NEAR(detail::weighted_sign_changes<double>(g, phi, Regularization::Weighted, 0.0), expected, 1e-15);
  EXPECT_EQ(detail::weighted_sign_changes<double>(g, phi, Regularization::Zone, 1e-11), 0.75);
  EXPECT_EQ(detail::weighted_sign_changes<double>(g, phi, Regularization::Zone, 0.3), 0.25);
}

TEST(Monotonicity, ZeroCrossingsCount) {
  GridMatrix<double> g(3, 1);
  g << 0.1, 0.0, 0.1;
  GridVector<double> phi = GridVector<double>::Ones(3);
  EXPECT_EQ(detail::weighted_sign_changes<double>(g, phi, Regularization::Zone, 1e-11), 2.0);
}

TEST(Monotonicity, ExhaustiveThreeByThreeOracle) {
  const double levels[3] = {0.0, 0.1, 0.2};
  const double gammas[3] = {1e-11, 0.01, 0.05};
  int checked = 0;
  for (int code = 1; code < 19683; ++code) {
    Table raw(3, std::vector<double>(3));
    double sum = 0;
    int c = code;
    for (int cell = 0; cell < 9; ++cell) {
      raw[cell / 3][cell % 3] = levels[c % 3];
      sum += levels[c % 3];
      c /= 3;
    }
    Table p = raw;
    GridMatrix<double> m(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        p[i][j] = raw[i][j] / sum;
        m(i, j) = p[i][j];
      }
    const GridDistribution<double> g{m};
    const auto w = monotonicity_indexes(g, Regularization::Weighted);
    const auto ow = causaldir::testing::monotonicity_oracle(p, Regularization::Weighted, 0.0);
    ASSERT_EQ(w.mi_x, ow.mi_x) << "code " << code;
    ASSERT_EQ(w.mi_y, ow.mi_y) << "code " << code;
    for (double gs : gammas) {
      const auto z = monotonicity_indexes(g, Regularization::Zone, std::optional<double>(gs));
      const auto oz = causaldir::testing::monotonicity_oracle(p, Regularization::Zone, gs);
      ASSERT_EQ(z.mi_x, oz.mi_x) << "code " << code << " gamma* " << gs;
      ASSERT_EQ(z.mi_y, oz.mi_y) << "code " << code << " gamma* " << gs;
    }
    ++checked;
  }
  EXPECT_EQ(checked, 19682);
}

TEST(Monotonicity, TransposeSwapsIndexesExactly) {
  std::mt19937_64 rng(10);
  for (int rep = 0; rep < 20; ++rep) {
    const auto p = causaldir::testing::random_grid(rng, 11);
    for (auto reg : {Regularization::Weighted, Regularization::Zone}) {
      const auto a = monotonicity_indexes(p, reg, std::optional<double>(1e-3));
      const auto b = monotonicity_indexes(transpose(p), reg, std::optional<double>(1e-3));
      EXPECT_EQ(a.mi_x, b.mi_y);
      EXPECT_EQ(a.mi_y, b.mi_x);
    }
  }
}

TEST(Monotonicity, ZoneNonIncreasingInGammaStar) {
  std::mt19937_64 rng(11);
  const auto p = causaldir::testing::random_grid(rng, 15);
  double prev_x = INFINITY, prev_y = INFINITY;
  for (double gs : {1e-12, 1e-4, 1e-3, 3e-3, 1e-2, 1.0}) {
    const auto r = monotonicity_indexes(p, Regularization::Zone, std::optional<double>(gs));
    EXPECT_LE(r.mi_x, prev_x);
    EXPECT_LE(r.mi_y, prev_y);
    prev_x = r.mi_x;
    prev_y = r.mi_y;
  }
  EXPECT_EQ(prev_x, 0.0);
}

TEST(Monotonicity, ZoneNeedsGammaStar) {
  GridDistribution<double> u{Eigen::MatrixXd::Constant(3, 3, 1.0 / 9)};
  EXPECT_THROW(monotonicity_indexes(u, Regularization::Zone), ParameterError);
}

TEST(MonotonicityDecide, LargerXIndexMeansXtoY) {
  MonotonicityResult<double> r;
  r.mi_x = 2.0;
  r.mi_y = 1.0;
  auto d = monotonicity_decide(r);
  EXPECT_EQ(d.direction, Direction::XtoY);
  EXPECT_EQ(d.delta, 1.0);
  r.mi_x = 1.0;
  EXPECT_EQ(monotonicity_decide(r).direction, Direction::Undecided);
  r.mi_x = 0.0;
  r.mi_y = 0.3;
  EXPECT_EQ(monotonicity_decide(r).direction, Direction::YtoX);
}

TEST(RegularizationNames, RoundTrip) {
  EXPECT_EQ(parse_regularization("zone"), Regularization::Zone);
  EXPECT_EQ(to_string(Regularization::Weighted), "weighted");
  EXPECT_THROW(parse_regularization("soft"), ConfigError);
}
