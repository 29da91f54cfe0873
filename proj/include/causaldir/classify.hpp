#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "causaldir/anticipated.hpp"
#include "causaldir/density.hpp"
#include "causaldir/ingest.hpp"
#include "causaldir/metrics.hpp"
#include "causaldir/monotonicity.hpp"

namespace causaldir {

enum class Method { AAG, Monotonicity };

std::string_view to_string(Method m);
Method parse_method(std::string_view name);

struct HyperParams {
  int k = 25;
  double bw_par = 0.175;
  MetricKind metric = MetricKind::PearsonDist;
  std::optional<int> m;
  std::optional<Regularization> regularization;
  std::optional<double> gamma_star;

  /// Checks the k/bw ranges and the m/gamma_star pairing rules.
  void validate(Method method) const;
};

struct DirectionDecision {
  Direction direction = Direction::Undecided;
  double delta = 0;
  Method method = Method::AAG;
  std::optional<MetricKind> metric;
  std::optional<Regularization> regularization;
};

/// Sign of `delta` to direction: > 0 X->Y, < 0 Y->X, 0 undecided.
Direction direction_from_delta(double delta);

/// Delta = M(phi, phi~_{Y->X}) - M(phi, phi~_{X->Y}) on an already fitted
/// joint; for ks_delta_max the delta_max statistic is used directly.
DirectionDecision decide_aag(const GridDistribution<double>& joint, MetricKind metric,
                             std::optional<int> m = std::nullopt);

/// Same, reusing precomputed anticipated joints.
DirectionDecision decide_aag(const GridDistribution<double>& joint,
                             const AnticipatedJoint<double>& a_xy,
                             const AnticipatedJoint<double>& a_yx, MetricKind metric,
                             std::optional<int> m = std::nullopt);

DirectionDecision monotonicity_decide(const MonotonicityResult<double>& result);

DirectionDecision classify_aag(const PairSample& normalized, const HyperParams& hp);
DirectionDecision classify_monotonicity(const PairSample& normalized, const HyperParams& hp);
DirectionDecision classify(Method method, const PairSample& normalized, const HyperParams& hp);

/// Symmetric bivariate statistics used to flag pairs the classifier is
/// likely to get wrong.
struct ScreeningFeatures {
  double mutual_information = 0;
  double kendall_tau = 0;
  double pearson_r = 0;
  double spearman_rho = 0;
  double kendall_r2 = 0;
  double pearson_r2 = 0;
  double spearman_r2 = 0;
  double cosine_similarity = 0;
  double jaccard_symmetry = 0;
  double diagonal_symmetry = 0;

  /// Value by feature name; throws ConfigError on unknown names.
  double get(std::string_view name) const;
  static const std::vector<std::string>& names();
};

struct ScreeningParams {
  int bins = 16;
  int k = 25;
  double bw_par = 0.175;
  int m = 7;
};

ScreeningFeatures screening_features(const PairSample& normalized, const ScreeningParams& params = {});

enum class Comparator { Less, LessEqual, Greater, GreaterEqual };

std::string_view to_string(Comparator c);
Comparator parse_comparator(std::string_view s);

struct ScreenRule {
  std::string feature;
  Comparator op = Comparator::Less;
  double threshold = 0;

  bool fires(const ScreeningFeatures& f) const;
};

/// mutual_information < 0.125
std::vector<ScreenRule> default_screen_rules();

/// Throws ConfigError if any rule names an unknown feature.
void validate_rules(const std::vector<ScreenRule>& rules);

enum class ScreenVerdict { Decisive, Indecisive };

/// Indecisive iff any rule fires.
ScreenVerdict screen(const ScreeningFeatures& features, const std::vector<ScreenRule>& rules);

}  // namespace causaldir
