#pragma once

#include <Eigen/Dense>

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "causaldir/classify.hpp"

namespace causaldir {

/// One classifier variant swept by a design: AAG with a metric, or the
/// monotonicity index with a regularization.
struct MethodSelector {
  Method method = Method::AAG;
  std::optional<MetricKind> metric;
  std::optional<Regularization> regularization;

  static MethodSelector aag(MetricKind metric) { return {Method::AAG, metric, std::nullopt}; }
  static MethodSelector monotonicity(Regularization r) { return {Method::Monotonicity, std::nullopt, r}; }

  /// "aag/pearson", "monot/zone", ...
  std::string label() const;
  bool uses_m() const { return method == Method::AAG && metric == MetricKind::JaccardDist; }
  bool uses_gamma() const {
    return method == Method::Monotonicity && regularization == Regularization::Zone;
  }
  bool operator==(const MethodSelector&) const = default;
};

struct DoeDesign {
  std::vector<int> k_levels;
  std::vector<double> bw_levels;
  std::vector<int> m_levels;
  std::vector<double> gamma_levels;
  std::vector<MethodSelector> methods;

  /// k = 20..65 step 5, bw_par = 0.025..0.25 step 0.025, m = 5..9,
  /// gamma* = 1e-11..1e-7 in decades; methods default to AAG-Pearson.
  static DoeDesign defaults();

  /// Throws ConfigError on empty or out-of-range level lists.
  void validate() const;
};

/// `count` levels from lo to hi inclusive, evenly or log-evenly spaced, each
/// rounded to 12 significant digits (so 0.025 * 3 prints as 0.075).
std::vector<double> level_range(double lo, double hi, int count, bool log_scale = false);

enum class Factor { K, BwPar, M, GammaStar };

std::string_view to_string(Factor f);
Factor parse_factor(std::string_view name);

/// Position of a run in the design. m and gamma are 0 when the method does
/// not use them.
struct FactorIndex {
  std::size_t method = 0;
  std::size_t k = 0;
  std::size_t bw = 0;
  std::size_t m = 0;
  std::size_t gamma = 0;

  auto operator<=>(const FactorIndex&) const = default;
};

struct PairDecision {
  int pair_id = 0;
  DirectionDecision decision;
  std::optional<Direction> truth;
  double weight = 1.0;
  bool correct = false;
};

struct RunRecord {
  MethodSelector selector;
  FactorIndex index;
  HyperParams hyperparams;
  std::vector<PairDecision> decisions;
  double accuracy = 0;

  /// Level of `f` in this run; nullopt for an unused factor.
  std::optional<double> factor_value(Factor f) const;
};

struct RunOptions {
  unsigned workers = 1;
  bool weighted = false;
};

/// Correct / total over pairs with truth, optionally weighted by the pair
/// weights. Undecided is never correct.
double score_accuracy(const std::vector<PairDecision>& decisions, bool weighted = false);

/// Evaluates every applicable factor combination of every method. Each
/// (k, bw_par) level pair is one work unit: the joint of every pair is fitted
/// once and shared by all methods and remaining factors. Records come back
/// sorted by FactorIndex whatever the worker count.
std::vector<RunRecord> run_doe(const std::vector<PairSample>& pairs, const DoeDesign& design,
                               const RunOptions& options = {});

/// Highest accuracy; ties go to the smallest factor index.
const RunRecord& best_run(const std::vector<RunRecord>& records);

struct SweepStats {
  double lcl5 = 0;
  double median = 0;
  double ucl95 = 0;
  double interval = 0;
};

/// Nearest-rank percentile (p in (0, 100]) of unsorted values.
double nearest_rank(std::vector<double> values, double p);

SweepStats sweep_stats(const std::vector<RunRecord>& records);

/// Mann-Whitney AUC with X->Y as the positive class; ties count 1/2.
double roc_auc(const std::vector<double>& scores, const std::vector<Direction>& truths);

struct AccuracyMap {
  Factor rows = Factor::K;
  Factor cols = Factor::BwPar;
  std::vector<double> row_levels;
  std::vector<double> col_levels;
  Eigen::MatrixXd accuracy;
};

/// Accuracy cross-tabulated over two factors. Throws ScoringError when a
/// cell is missing or when two records land in the same cell.
AccuracyMap accuracy_map(const std::vector<RunRecord>& records, Factor rows, Factor cols);

}  // namespace causaldir
