#include <gtest/gtest.h>

#include <cmath>

#include "causaldir/evalbench.hpp"
#include "test_support.hpp"

using namespace causaldir;
using causaldir::testing::swapped;

namespace {

// Four labelled synthetic pairs, two in each direction.
std::vector<PairSample> small_pairs() {
  std::vector<PairSample> out;
  const Mechanism mech[] = {Mechanism::Quadratic, Mechanism::Sine, Mechanism::Sigmoid, Mechanism::Quadratic};
  for (int i = 0; i < 4; ++i) {
    auto p = normalize(generate_synthetic(10 + i, 150, mech[i], 0.08));
    if (i % 2) p = swapped(p);
    p.id = i + 1;
    out.push_back(p);
  }
  return out;
}

DoeDesign small_design() {
  DoeDesign d;
  d.k_levels = {8, 12};
  d.bw_levels = {0.1, 0.2};
  d.m_levels = {5, 7};
  d.gamma_levels = {1e-11, 1e-3};
  d.methods = {MethodSelector::aag(MetricKind::PearsonDist), MethodSelector::aag(MetricKind::JaccardDist),
               MethodSelector::monotonicity(Regularization::Zone),
               MethodSelector::monotonicity(Regularization::Weighted)};
  return d;
}

RunRecord record_with(double accuracy, FactorIndex index) {
  RunRecord r;
  r.accuracy = accuracy;
  r.index = index;
  return r;
}

}  // namespace

TEST(LevelRange, EvenAndLogSpacing) {
  const auto bw = level_range(0.025, 0.25, 10);
  ASSERT_EQ(bw.size(), 10u);
  EXPECT_EQ(bw[2], 0.075);
  EXPECT_EQ(bw[9], 0.25);
  const auto g = level_range(1e-11, 1e-7, 5, true);
  EXPECT_EQ(g, (std::vector<double>{1e-11, 1e-10, 1e-9, 1e-8, 1e-7}));
  EXPECT_EQ(level_range(3, 9, 1), std::vector<double>{3});
  EXPECT_THROW(level_range(0, 1, 3, true), ConfigError);
  EXPECT_THROW(level_range(0, 1, 0), ConfigError);
}

TEST(DoeDesign, DefaultLevels) {
  const auto d = DoeDesign::defaults();
  EXPECT_EQ(d.k_levels.size(), 10u);
  EXPECT_EQ(d.k_levels.front(), 20);
  EXPECT_EQ(d.k_levels.back(), 65);
  EXPECT_EQ(d.bw_levels.size(), 10u);
  EXPECT_EQ(d.m_levels, (std::vector<int>{5, 6, 7, 8, 9}));
  EXPECT_EQ(d.gamma_levels.size(), 5u);
  ASSERT_EQ(d.methods.size(), 1u);
  EXPECT_EQ(d.methods[0].label(), "aag/pearson");
}

TEST(DoeDesign, ValidationErrors) {
  auto d = small_design();
  EXPECT_NO_THROW(d.validate());
  d.m_levels = {10};
  EXPECT_THROW(d.validate(), ConfigError);
  d = small_design();
  d.gamma_levels.clear();
  EXPECT_THROW(d.validate(), ConfigError);
  d = small_design();
  d.k_levels = {2};
  EXPECT_THROW(d.validate(), ConfigError);
  d = small_design();
  d.methods.clear();
  EXPECT_THROW(d.validate(), ConfigError);
}

TEST(RunDoe, SingleLevelDesignGivesOneRecord) {
  DoeDesign d;
  d.k_levels = {10};
  d.bw_levels = {0.15};
  d.methods = {MethodSelector::aag(MetricKind::PearsonDist)};
  const auto pairs = small_pairs();
  const auto records = run_doe(pairs, d);
  ASSERT_EQ(records.size(), 1u);
  ASSERT_EQ(records[0].decisions.size(), pairs.size());
  // Must agree with classifying each pair on its own.
  int hits = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto solo = classify_aag(pairs[i], records[0].hyperparams);
    EXPECT_EQ(records[0].decisions[i].decision.delta, solo.delta);
    EXPECT_EQ(records[0].decisions[i].decision.direction, solo.direction);
    hits += solo.direction == *pairs[i].truth;
  }
  EXPECT_DOUBLE_EQ(records[0].accuracy, hits / 4.0);
}

TEST(RunDoe, RecordCountsFollowApplicableFactors) {
  const auto records = run_doe(small_pairs(), small_design());
  // 4 (k, bw) cells x (pearson 1 + jaccard 2 m + zone 2 gamma + weighted 1)
  ASSERT_EQ(records.size(), 4u * 6u);
  for (std::size_t i = 1; i < records.size(); ++i) EXPECT_LT(records[i - 1].index, records[i].index);
  for (const auto& r : records) {
    EXPECT_EQ(r.hyperparams.m.has_value(), r.selector.uses_m());
    EXPECT_EQ(r.hyperparams.gamma_star.has_value(), r.selector.uses_gamma());
    EXPECT_NO_THROW(r.hyperparams.validate(r.selector.method));
  }
}

TEST(RunDoe, DefaultDesignSizes) {
  auto d = DoeDesign::defaults();
  std::size_t units = d.k_levels.size() * d.bw_levels.size();
  EXPECT_EQ(units, 100u);
  EXPECT_EQ(units * d.m_levels.size(), 500u);
}

TEST(RunDoe, WorkerCountDoesNotChangeResults) {
  const auto pairs = small_pairs();
  const auto a = run_doe(pairs, small_design(), {1, false});
  const auto b = run_doe(pairs, small_design(), {4, false});
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].index, b[i].index);
    EXPECT_EQ(a[i].accuracy, b[i].accuracy);
    for (std::size_t p = 0; p < a[i].decisions.size(); ++p)
      EXPECT_EQ(a[i].decisions[p].decision.delta, b[i].decisions[p].decision.delta);
  }
}

TEST(RunDoe, MissingTruthIsRejected) {
  auto pairs = small_pairs();
  pairs[2].truth.reset();
  EXPECT_THROW(run_doe(pairs, small_design()), ScoringError);
}

TEST(RunDoe, WorkerErrorsPropagate) {
  auto pairs = small_pairs();
  pairs[1].x.conservativeResize(1);
  pairs[1].y.conservativeResize(1);
  EXPECT_THROW(run_doe(pairs, small_design(), {3, false}), DimensionError);
}

TEST(ScoreAccuracy, WeightsAndUndecided) {
  std::vector<PairDecision> d(4);
  for (auto& x : d) x.truth = Direction::XtoY;
  d[0].correct = d[1].correct = true;
  d[0].weight = 3;
  EXPECT_DOUBLE_EQ(score_accuracy(d), 0.5);
  EXPECT_DOUBLE_EQ(score_accuracy(d, true), 4.0 / 6.0);
  for (auto& x : d) x.weight = 1;
  EXPECT_EQ(score_accuracy(d, true), score_accuracy(d));
  d[3].truth.reset();
  EXPECT_DOUBLE_EQ(score_accuracy(d), 2.0 / 3.0);
}

TEST(BestRun, HighestAccuracyThenSmallestIndex) {
  std::vector<RunRecord> r{record_with(0.70, {0, 0, 0, 0, 0}), record_with(0.75, {0, 1, 0, 0, 0})};
  EXPECT_EQ(best_run(r).accuracy, 0.75);
  r.push_back(record_with(0.75, {0, 0, 3, 0, 0}));
  EXPECT_EQ(best_run(r).index, (FactorIndex{0, 0, 3, 0, 0}));
  EXPECT_THROW(best_run({}), ScoringError);
}

TEST(SweepStats, NearestRank) {
  std::vector<RunRecord> r;
  for (int i = 10; i >= 1; --i) r.push_back(record_with(i / 10.0, {}));
  const auto s = sweep_stats(r);
  EXPECT_EQ(s.lcl5, 0.1);
  EXPECT_EQ(s.median, 0.5);
  EXPECT_EQ(s.ucl95, 1.0);
  EXPECT_DOUBLE_EQ(s.interval, 0.9);
  EXPECT_EQ(nearest_rank({3, 1, 2}, 100), 3);
  EXPECT_EQ(nearest_rank({3, 1, 2}, 34), 2);
  EXPECT_THROW(nearest_rank({1}, 0), ParameterError);
}

TEST(RocAuc, KnownValues) {
  const auto P = Direction::XtoY, N = Direction::YtoX;
  EXPECT_DOUBLE_EQ(roc_auc({0.9, 0.4, 0.6, 0.1}, {P, P, N, N}), 0.75);
  EXPECT_DOUBLE_EQ(roc_auc({1, 1, 1, 1}, {P, N, P, N}), 0.5);
  EXPECT_DOUBLE_EQ(roc_auc({5, 4, -1, -2}, {P, P, N, N}), 1.0);
  EXPECT_DOUBLE_EQ(roc_auc({5, 4, -1, -2}, {N, N, P, P}), 0.0);
  EXPECT_THROW(roc_auc({1, 2}, {P, P}), ScoringError);
  EXPECT_THROW(roc_auc({1, 2}, {P}), ScoringError);
}

TEST(RocAuc, PairCountingOracleAndMonotoneInvariance) {
  SplitMix64 rng(3);
  std::vector<double> s(60);
  std::vector<Direction> t(60);
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = std::round(rng.normal() * 4) / 4;  // plenty of ties
    t[i] = rng.uniform() < 0.4 + 0.1 * s[i] ? Direction::XtoY : Direction::YtoX;
  }
  double num = 0, den = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      if (t[i] == Direction::XtoY && t[j] == Direction::YtoX) {
        den += 1;
        num += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
      }
  const double auc = roc_auc(s, t);
  EXPECT_NEAR(auc, num / den, 1e-14);
  std::vector<double> e(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) e[i] = std::exp(3 * s[i]) - 7;
  EXPECT_NEAR(roc_auc(e, t), auc, 1e-14);
}

TEST(AccuracyMap, ShapeAndErrors) {
  const auto records = run_doe(small_pairs(), small_design());
  std::vector<RunRecord> pearson;
  for (const auto& r : records)
    if (r.selector == MethodSelector::aag(MetricKind::PearsonDist)) pearson.push_back(r);
  const auto map = accuracy_map(pearson, Factor::K, Factor::BwPar);
  EXPECT_EQ(map.accuracy.rows(), 2);
  EXPECT_EQ(map.accuracy.cols(), 2);
  EXPECT_EQ(map.row_levels, (std::vector<double>{8, 12}));
  EXPECT_EQ(map.col_levels, (std::vector<double>{0.1, 0.2}));
  for (const auto& r : pearson) {
    const Eigen::Index i = r.hyperparams.k == 8 ? 0 : 1;
    const Eigen::Index j = r.hyperparams.bw_par == 0.1 ? 0 : 1;
    EXPECT_EQ(map.accuracy(i, j), r.accuracy);
  }
  EXPECT_THROW(accuracy_map(records, Factor::K, Factor::BwPar), ScoringError);
  EXPECT_THROW(accuracy_map(pearson, Factor::K, Factor::M), ScoringError);
  EXPECT_THROW(accuracy_map(pearson, Factor::K, Factor::K), ScoringError);
  pearson.pop_back();
  EXPECT_THROW(accuracy_map(pearson, Factor::K, Factor::BwPar), ScoringError);
}

TEST(FactorNames, RoundTrip) {
  for (Factor f : {Factor::K, Factor::BwPar, Factor::M, Factor::GammaStar})
    EXPECT_EQ(parse_factor(to_string(f)), f);
  EXPECT_THROW(parse_factor("noise"), ConfigError);
}
