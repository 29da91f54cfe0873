#include "causaldir/classify.hpp"

#include <cmath>
#include <string>

#include "causaldir/rank_stats.hpp"

namespace causaldir {

std::string_view to_string(Method m) { return m == Method::AAG ? "aag" : "monot"; }

Method parse_method(std::string_view name) {
  if (name == "aag") return Method::AAG;
  if (name == "monot" || name == "monotonicity") return Method::Monotonicity;
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

void HyperParams::validate(Method method) const {
  if (k < 3) throw ParameterError("k must be >= 3, got " + std::to_string(k));
  if (!(bw_par > 0) || !std::isfinite(bw_par)) throw ParameterError("bw_par must be positive");
  if (method == Method::AAG) {
    const bool jaccard = metric == MetricKind::JaccardDist;
    if (jaccard && !m) throw ParameterError("metric jaccard needs a level m");
    if (!jaccard && m) throw ParameterError("level m only applies to metric jaccard");
    if (m && (*m < 1 || *m > 9)) throw ParameterError("level m must be in [1, 9]");
  } else {
    if (!regularization) throw ParameterError("monotonicity needs a regularization");
    const bool zone = *regularization == Regularization::Zone;
    if (zone && !gamma_star) throw ParameterError("zone regularization needs gamma_star");
    if (!zone && gamma_star) throw ParameterError("gamma_star only applies to zone regularization");
    if (gamma_star && !(*gamma_star > 0)) throw ParameterError("gamma_star must be positive");
  }
}

Direction direction_from_delta(double delta) {
  if (delta > 0) return Direction::XtoY;
  if (delta < 0) return Direction::YtoX;
  return Direction::Undecided;
}

DirectionDecision decide_aag(const GridDistribution<double>& joint,
                             const AnticipatedJoint<double>& a_xy,
                             const AnticipatedJoint<double>& a_yx, MetricKind metric,
                             std::optional<int> m) {
  DirectionDecision out;
  out.method = Method::AAG;
  out.metric = metric;
  if (metric == MetricKind::KSDeltaMax)
    out.delta = delta_max(a_xy, a_yx);
  else
    out.delta = deviation(metric, joint, a_yx.dist, m) - deviation(metric, joint, a_xy.dist, m);
  out.direction = direction_from_delta(out.delta);
  return out;
}

DirectionDecision decide_aag(const GridDistribution<double>& joint, MetricKind metric,
                             std::optional<int> m) {
  const auto a_xy = anticipated_joint(joint, Direction::XtoY);
  const auto a_yx = anticipated_joint(joint, Direction::YtoX);
  return decide_aag(joint, a_xy, a_yx, metric, m);
}

DirectionDecision monotonicity_decide(const MonotonicityResult<double>& result) {
  DirectionDecision out;
  out.method = Method::Monotonicity;
  out.regularization = result.regularization;
  out.delta = result.mi_x - result.mi_y;
  out.direction = direction_from_delta(out.delta);
  return out;
}

DirectionDecision classify_aag(const PairSample& normalized, const HyperParams& hp) {
  hp.validate(Method::AAG);
  const auto joint = fit_joint<double>(normalized, hp.k, hp.bw_par);
  return decide_aag(joint, hp.metric, hp.m);
}

DirectionDecision classify_monotonicity(const PairSample& normalized, const HyperParams& hp) {
  hp.validate(Method::Monotonicity);
  const auto joint = fit_joint<double>(normalized, hp.k, hp.bw_par);
  return monotonicity_decide(monotonicity_indexes(joint, *hp.regularization, hp.gamma_star));
}

DirectionDecision classify(Method method, const PairSample& normalized, const HyperParams& hp) {
  return method == Method::AAG ? classify_aag(normalized, hp)
                               : classify_monotonicity(normalized, hp);
}

const std::vector<std::string>& ScreeningFeatures::names() {
  static const std::vector<std::string> kNames = {
      "mutual_information", "kendall_tau",  "pearson_r",         "spearman_rho",
      "kendall_r2",         "pearson_r2",   "spearman_r2",       "cosine_similarity",
      "jaccard_symmetry",   "diagonal_symmetry"};
  return kNames;
}

double ScreeningFeatures::get(std::string_view name) const {
  if (name == "mutual_information") return mutual_information;
  if (name == "kendall_tau") return kendall_tau;
  if (name == "pearson_r") return pearson_r;
  if (name == "spearman_rho") return spearman_rho;
  if (name == "kendall_r2") return kendall_r2;
  if (name == "pearson_r2") return pearson_r2;
  if (name == "spearman_r2") return spearman_r2;
  if (name == "cosine_similarity") return cosine_similarity;
  if (name == "jaccard_symmetry") return jaccard_symmetry;
  if (name == "diagonal_symmetry") return diagonal_symmetry;
  throw ConfigError("unknown screening feature '" + std::string(name) + "'");
}

ScreeningFeatures screening_features(const PairSample& normalized, const ScreeningParams& params) {
  if (params.bins < 2) throw ParameterError("screening bins must be >= 2");
  const auto& x = normalized.x;
  const auto& y = normalized.y;
  ScreeningFeatures f;
  f.mutual_information = stats::histogram_mutual_information(x, y, params.bins);
  f.kendall_tau = stats::kendall_tau_b(x, y);
  f.pearson_r = stats::pearson(x, y);
  f.spearman_rho = stats::spearman(x, y);
  f.kendall_r2 = f.kendall_tau * f.kendall_tau;
  f.pearson_r2 = f.pearson_r * f.pearson_r;
  f.spearman_r2 = f.spearman_rho * f.spearman_rho;
  const double norms = x.norm() * y.norm();
  f.cosine_similarity = norms > 0 ? x.dot(y) / norms : 0.0;

  const auto joint = fit_joint<double>(normalized, params.k, params.bw_par);
  const auto flipped = transpose(joint);
  f.jaccard_symmetry = jaccard_index(level_mask(joint, params.m), level_mask(flipped, params.m));
  f.diagonal_symmetry = detail::pearson_r(joint.mass, flipped.mass);
  return f;
}

std::string_view to_string(Comparator c) {
  switch (c) {
    case Comparator::Less: return "<";
    case Comparator::LessEqual: return "<=";
    case Comparator::Greater: return ">";
    case Comparator::GreaterEqual: return ">=";
  }
  return "<";
}

Comparator parse_comparator(std::string_view s) {
  if (s == "<" || s == "lt") return Comparator::Less;
  if (s == "<=" || s == "le") return Comparator::LessEqual;
  if (s == ">" || s == "gt") return Comparator::Greater;
  if (s == ">=" || s == "ge") return Comparator::GreaterEqual;
  throw ConfigError("unknown comparator '" + std::string(s) + "'");
}

bool ScreenRule::fires(const ScreeningFeatures& f) const {
  const double v = f.get(feature);
  switch (op) {
    case Comparator::Less: return v < threshold;
    case Comparator::LessEqual: return v <= threshold;
    case Comparator::Greater: return v > threshold;
    case Comparator::GreaterEqual: return v >= threshold;
  }
  return false;
}

std::vector<ScreenRule> default_screen_rules() {
  return {ScreenRule{"mutual_information", Comparator::Less, 0.125}};
}

void validate_rules(const std::vector<ScreenRule>& rules) {
  const ScreeningFeatures probe;
  for (const auto& r : rules) {
    (void)probe.get(r.feature);
    if (!std::isfinite(r.threshold))
      throw ConfigError("screen rule on '" + r.feature + "' has a non-finite threshold");
  }
}

ScreenVerdict screen(const ScreeningFeatures& features, const std::vector<ScreenRule>& rules) {
  for (const auto& r : rules)
    if (r.fires(features)) return ScreenVerdict::Indecisive;
  return ScreenVerdict::Decisive;
}

}  // namespace causaldir
