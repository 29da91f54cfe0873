#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "causaldir/density.hpp"
#include "test_support.hpp"

using namespace causaldir;

namespace {

// Direct kernel sum with the normalizing constant, no window pruning.
Eigen::MatrixXd brute_force_kde(const PairSample& p, int k, double bw) {
  const double n = static_cast<double>(p.size());
  const double mx = p.x.mean(), my = p.y.mean();
  Eigen::Matrix2d s = Eigen::Matrix2d::Zero();
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const Eigen::Vector2d d(p.x[i] - mx, p.y[i] - my);
    s += d * d.transpose();
  }
  s /= n - 1;
  const Eigen::Matrix2d h = bw * bw * s;
  const Eigen::Matrix2d inv = h.inverse();
  const double norm = 1.0 / (2 * std::numbers::pi * std::sqrt(h.determinant()) * n);
  Eigen::MatrixXd out(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const Eigen::Vector2d g(double(i) / (k - 1), double(j) / (k - 1));
      double acc = 0;
      for (Eigen::Index t = 0; t < p.size(); ++t) {
        const Eigen::Vector2d d = g - Eigen::Vector2d(p.x[t], p.y[t]);
        acc += norm * std::exp(-0.5 * d.dot(inv * d));
      }
      out(i, j) = acc;
    }
  }
  return out / out.sum();
}

PairSample random_pair(std::uint64_t seed, int n) {
  auto p = generate_synthetic(seed, n, Mechanism::Sigmoid, 0.1);
  return normalize(p);
}

}  // namespace

TEST(GridCoords, EndpointInclusive) {
  const auto c = grid_coords(5);
  EXPECT_EQ(c[0], 0.0);
  EXPECT_EQ(c[2], 0.5);
  EXPECT_EQ(c[4], 1.0);
}

TEST(FitJoint, MatchesBruteForceKernelSum) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto p = random_pair(seed, 60);
    for (int k : {3, 7, 16}) {
      for (double bw : {0.05, 0.2}) {
        const auto joint = fit_joint<double>(p, k, bw);
        const auto oracle = brute_force_kde(p, k, bw);
        const double scale = oracle.maxCoeff();
        EXPECT_LT((joint.mass - oracle).cwiseAbs().maxCoeff() / scale, 1e-12)
            << "seed " << seed << " k " << k << " bw " << bw;
      }
    }
  }
}

TEST(FitJoint, CollinearTwoPointsAreRegularized) {
  PairSample p;
  p.x = Eigen::Vector2d(0, 1);
  p.y = Eigen::Vector2d(0, 1);
  KdeInfo info;
  const auto joint = fit_joint<double>(p, 3, 0.2, &info);
  EXPECT_TRUE(info.regularized);
  // Along the diagonal the kernel variance is 0.04 and the off-diagonal
  // direction collapses: corners get 1 + e^-25, the centre 2 e^-6.25.
  const double corner = 1 + std::exp(-25.0);
  const double centre = 2 * std::exp(-6.25);
  const double total = 2 * corner + centre;
  EXPECT_NEAR(joint.mass(0, 0), corner / total, 1e-9);
  EXPECT_NEAR(joint.mass(1, 1), centre / total, 1e-9);
  EXPECT_NEAR(joint.mass(2, 2), corner / total, 1e-9);
  EXPECT_EQ(joint.mass(0, 1), 0.0);
  EXPECT_EQ(joint.mass(2, 0), 0.0);
  EXPECT_NEAR(joint.mass.sum(), 1.0, 1e-12);
}

TEST(FitJoint, UnitMassAndNonNegative) {
  for (std::uint64_t seed = 10; seed < 15; ++seed) {
    const auto joint = fit_joint<double>(random_pair(seed, 200), 25, 0.175);
    EXPECT_NEAR(joint.mass.sum(), 1.0, 1e-9);
    EXPECT_GE(joint.mass.minCoeff(), 0.0);
  }
}

TEST(FitJoint, SwapGivesTranspose) {
  for (std::uint64_t seed = 20; seed < 25; ++seed) {
    const auto p = random_pair(seed, 300);
    const auto a = fit_joint<double>(p, 21, 0.1);
    const auto b = fit_joint<double>(causaldir::testing::swapped(p), 21, 0.1);
    EXPECT_LT((a.mass - b.mass.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(FitJoint, SymmetricDataGivesSymmetricMass) {
  auto base = random_pair(31, 150);
  PairSample p;
  p.x.resize(300);
  p.y.resize(300);
  p.x << base.x, base.y;
  p.y << base.y, base.x;
  const auto joint = fit_joint<double>(p, 20, 0.15);
  EXPECT_LT((joint.mass - joint.mass.transpose()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(FitJoint, RejectsBadParameters) {
  const auto p = random_pair(1, 60);
  EXPECT_THROW(fit_joint<double>(p, 2, 0.1), ParameterError);
  EXPECT_THROW(fit_joint<double>(p, 10, 0.0), ParameterError);
  EXPECT_THROW(fit_joint<double>(p, 10, -1.0), ParameterError);
}

TEST(FitJoint, FloatInstantiation) {
  const auto p = random_pair(5, 100);
  const auto jf = fit_joint<float>(p, 15, 0.2);
  const auto jd = fit_joint<double>(p, 15, 0.2);
  EXPECT_NEAR(jf.mass.sum(), 1.0f, 1e-5f);
  EXPECT_LT((jf.mass.cast<double>() - jd.mass).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Marginals, UniformAndOneHot) {
  GridDistribution<double> u{Eigen::MatrixXd::Constant(4, 4, 1.0 / 16)};
  const auto mu = marginals(u);
  EXPECT_TRUE(mu.phi_x.isApprox(Eigen::VectorXd::Constant(4, 0.25)));
  EXPECT_TRUE(mu.phi_y.isApprox(Eigen::VectorXd::Constant(4, 0.25)));

  GridDistribution<double> h{Eigen::MatrixXd::Zero(3, 3)};
  h.mass(2, 1) = 1;
  const auto mh = marginals(h);
  EXPECT_EQ(mh.phi_x, Eigen::Vector3d(0, 0, 1));
  EXPECT_EQ(mh.phi_y, Eigen::Vector3d(0, 1, 0));
}

TEST(Marginals, ConserveMass) {
  std::mt19937_64 rng(4);
  const auto g = causaldir::testing::random_grid(rng, 9);
  const auto m = marginals(g);
  EXPECT_NEAR(m.phi_x.sum(), 1.0, 1e-9);
  EXPECT_NEAR(m.phi_y.sum(), 1.0, 1e-9);
}

TEST(Conditionals, HandNormalization) {
  const double c = 0.7;
  Eigen::Matrix3d m;
  m << 0.1 * c, 0.2 * c, 0.1 * c, 0.3, 0.3, 0.3, 0.05, 0.05, 0.05;
  GridDistribution<double> g{m / m.sum()};
  const auto cond = conditionals(g, Axis::GivenX);
  EXPECT_NEAR(cond.slices(0, 0), 0.25, 1e-15);
  EXPECT_NEAR(cond.slices(0, 1), 0.5, 1e-15);
  EXPECT_NEAR(cond.slices(0, 2), 0.25, 1e-15);
  EXPECT_EQ(cond.slice_mass, marginals(g).phi_x);
}

TEST(Conditionals, UniformJointGivesUniformSlices) {
  GridDistribution<double> u{Eigen::MatrixXd::Constant(5, 5, 1.0 / 25)};
  for (Axis a : {Axis::GivenX, Axis::GivenY}) {
    const auto cond = conditionals(u, a);
    EXPECT_TRUE(cond.slices.isApprox(Eigen::MatrixXd::Constant(5, 5, 0.2)));
  }
}

TEST(Conditionals, ZeroMassSliceIsUniform) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  m(0, 0) = 0.5;
  m(2, 1) = 0.5;
  const auto cond = conditionals(GridDistribution<double>{m}, Axis::GivenX);
  EXPECT_EQ(cond.slice_mass[1], 0.0);
  EXPECT_TRUE(cond.slices.row(1).isApprox(Eigen::RowVector3d::Constant(1.0 / 3)));
}

TEST(Conditionals, SlicesSumToOneAndMatchMarginals) {
  const auto joint = fit_joint<double>(random_pair(42, 400), 25, 0.175);
  const auto marg = marginals(joint);
  for (Axis a : {Axis::GivenX, Axis::GivenY}) {
    const auto cond = conditionals(joint, a);
    EXPECT_EQ(cond.slice_mass, a == Axis::GivenX ? marg.phi_x : marg.phi_y);
    for (Eigen::Index i = 0; i < cond.slices.rows(); ++i)
      if (cond.slice_mass[i] > 0) EXPECT_NEAR(cond.slices.row(i).sum(), 1.0, 1e-9);
  }
}

TEST(WriteGrid, FullPrecisionRows) {
  Eigen::Matrix2d m;
  m << 0.1, 0.2, 0.3, 0.4;
  std::ostringstream os;
  write_grid_csv(os, GridDistribution<double>{m});
  EXPECT_EQ(os.str(), "0.1,0.2\n0.3,0.4\n");
}
