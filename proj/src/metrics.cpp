#include "causaldir/metrics.hpp"
#include "causaldir/monotonicity.hpp"

#include <string>

namespace causaldir {

std::string_view to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::KL: return "kl";
    case MetricKind::Cosine: return "cosine";
    case MetricKind::Entropy: return "entropy";
    case MetricKind::MIScaled: return "mi";
    case MetricKind::MINormalized: return "mi_norm";
    case MetricKind::PearsonDist: return "pearson";
    case MetricKind::KSMean: return "ks_mean";
    case MetricKind::KSMax: return "ks_max";
    case MetricKind::KSDeltaMax: return "ks_delta_max";
    case MetricKind::JaccardDist: return "jaccard";
  }
  return "pearson";
}

MetricKind parse_metric(std::string_view name) {
  for (MetricKind kind : kAllMetrics)
    if (to_string(kind) == name) return kind;
  throw ConfigError("unknown metric '" + std::string(name) + "'");
}

std::string_view to_string(Regularization r) {
  return r == Regularization::Weighted ? "weighted" : "zone";
}

Regularization parse_regularization(std::string_view name) {
  if (name == "weighted") return Regularization::Weighted;
  if (name == "zone") return Regularization::Zone;
  throw ConfigError("unknown regularization '" + std::string(name) + "'");
}

}  // namespace causaldir
