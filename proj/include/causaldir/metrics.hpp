#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "causaldir/anticipated.hpp"
#include "causaldir/density.hpp"

namespace causaldir {

/// Deviation metrics between an observed and an anticipated joint. Every
/// kind is oriented so that lower means closer.
enum class MetricKind {
  KL,
  Cosine,
  Entropy,
  MIScaled,
  MINormalized,
  PearsonDist,
  KSMean,
  KSMax,
  KSDeltaMax,
  JaccardDist,
};

inline constexpr MetricKind kAllMetrics[] = {
    MetricKind::KL,          MetricKind::Cosine, MetricKind::Entropy,
    MetricKind::MIScaled,    MetricKind::MINormalized, MetricKind::PearsonDist,
    MetricKind::KSMean,      MetricKind::KSMax,  MetricKind::KSDeltaMax,
    MetricKind::JaccardDist,
};

std::string_view to_string(MetricKind kind);
MetricKind parse_metric(std::string_view name);

/// Cells are quantized into this many equal-width bins for the MI kinds.
inline constexpr int kMiBins = 64;
/// Replacement for zero cells in the KL denominator.
inline constexpr double kKlFloor = 1e-12;

using LevelMask = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Cells whose mass exceeds m/10 of the grid maximum. Cells equal to the
/// maximum are always included, so the mask is never empty.
template <typename Scalar>
LevelMask level_mask(const GridDistribution<Scalar>& p, int m) {
  if (m < 1 || m > 9) throw ParameterError("level m must be in [1, 9]");
  const Scalar peak = p.mass.maxCoeff();
  const Scalar threshold = Scalar(m) * peak / Scalar(10);
  return ((p.mass.array() > threshold) || (p.mass.array() == peak)).matrix();
}

/// |A and B| / |A or B|; 1 for two empty masks.
inline double jaccard_index(const LevelMask& a, const LevelMask& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("mask size mismatch");
  const auto inter = (a.array() && b.array()).count();
  const auto uni = (a.array() || b.array()).count();
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

namespace detail {

template <typename Scalar>
Scalar xlogx(Scalar v) {
  return v > 0 ? v * std::log(v) : Scalar(0);
}

/// Equal-width bin labels of the cell values over their own [min, max].
template <typename Scalar>
Eigen::ArrayXi cell_labels(const GridMatrix<Scalar>& m, int bins) {
  const Scalar lo = m.minCoeff();
  const Scalar hi = m.maxCoeff();
  const Eigen::Index n = m.size();
  Eigen::ArrayXi out = Eigen::ArrayXi::Zero(n);
  if (!(hi > lo)) return out;
  const Scalar width = (hi - lo) / Scalar(bins);
  for (Eigen::Index c = 0; c < n; ++c) {
    const int b = static_cast<int>(std::floor((m.data()[c] - lo) / width));
    out[c] = std::clamp(b, 0, bins - 1);
  }
  return out;
}

struct LabelInformation {
  double mutual = 0;  // nats
  double entropy_a = 0;
  double entropy_b = 0;
};

/// Mutual information of two paired label arrays with values in [0, bins).
inline LabelInformation label_information(const Eigen::ArrayXi& a, const Eigen::ArrayXi& b,
                                          int bins) {
  const double n = static_cast<double>(a.size());
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(bins, bins);
  for (Eigen::Index c = 0; c < a.size(); ++c) table(a[c], b[c]) += 1.0;
  const Eigen::VectorXd ra = table.rowwise().sum();
  const Eigen::VectorXd rb = table.colwise().sum().transpose();
  LabelInformation out;
  for (int i = 0; i < bins; ++i) {
    if (ra[i] > 0) out.entropy_a -= ra[i] / n * std::log(ra[i] / n);
    if (rb[i] > 0) out.entropy_b -= rb[i] / n * std::log(rb[i] / n);
  }
  for (int j = 0; j < bins; ++j) {
    for (int i = 0; i < bins; ++i) {
      const double c = table(i, j);
      if (c > 0) out.mutual += c / n * std::log(c * n / (ra[i] * rb[j]));
    }
  }
  out.mutual = std::max(0.0, out.mutual);
  return out;
}

template <typename Scalar>
Scalar pearson_r(const GridMatrix<Scalar>& p, const GridMatrix<Scalar>& q) {
  const auto a = p.array() - p.mean();
  const auto b = q.array() - q.mean();
  const Scalar saa = a.square().sum();
  const Scalar sbb = b.square().sum();
  if (!(saa > 0) || !(sbb > 0)) return Scalar(0);
  return (a * b).sum() / std::sqrt(saa * sbb);
}

}  // namespace detail

/// Deviation M[P, Q] of kind `kind`. `m` is the level for JaccardDist.
/// KSDeltaMax compares two anticipated joints and is served by delta_max.
template <typename Scalar>
Scalar deviation(MetricKind kind, const GridDistribution<Scalar>& p,
                 const GridDistribution<Scalar>& q, std::optional<int> m = std::nullopt) {
  if (p.mass.rows() != q.mass.rows() || p.mass.cols() != q.mass.cols())
    throw DimensionError("grid size mismatch");
  const auto& P = p.mass;
  const auto& Q = q.mass;
  switch (kind) {
    case MetricKind::KL: {
      const auto floor = Scalar(kKlFloor);
      Scalar total = 0;
      for (Eigen::Index c = 0; c < P.size(); ++c) {
        const Scalar pc = P.data()[c];
        if (pc > 0) {
          const Scalar qc = Q.data()[c] > 0 ? Q.data()[c] : floor;
          total += pc * std::log(pc / qc);
        }
      }
      return total;
    }
    case MetricKind::Cosine: {
      const Scalar denom = P.norm() * Q.norm();
      if (!(denom > 0)) return Scalar(1);
      return Scalar(1) - P.cwiseProduct(Q).sum() / denom;
    }
    case MetricKind::Entropy: {
      Scalar total = 0;
      for (Eigen::Index c = 0; c < P.size(); ++c)
        total += -detail::xlogx(P.data()[c]) + detail::xlogx(Q.data()[c]);
      return total;
    }
    case MetricKind::MIScaled:
    case MetricKind::MINormalized: {
      const auto la = detail::cell_labels(P, kMiBins);
      const auto lb = detail::cell_labels(Q, kMiBins);
      const auto info = detail::label_information(la, lb, kMiBins);
      if (kind == MetricKind::MIScaled) {
        // H(P) - I(P, Q): shifts -I by a term that only depends on P, which
        // cancels in the directional difference and is 0 for P == Q.
        return Scalar(std::max(0.0, info.entropy_a - info.mutual));
      }
      double nmi;
      if (info.entropy_a == 0 && info.entropy_b == 0)
        nmi = 1.0;
      else if (info.entropy_a == 0 || info.entropy_b == 0)
        nmi = 0.0;
      else
        nmi = info.mutual / (0.5 * (info.entropy_a + info.entropy_b));
      return Scalar(1.0 - std::min(1.0, nmi));
    }
    case MetricKind::PearsonDist:
      return Scalar(1) - detail::pearson_r(P, Q);
    case MetricKind::KSMean:
      return (P - Q).cwiseAbs().sum() / Scalar(P.size());
    case MetricKind::KSMax:
      return (P - Q).cwiseAbs().maxCoeff();
    case MetricKind::JaccardDist: {
      if (!m) throw ParameterError("jaccard metric needs a level m");
      return Scalar(1) - Scalar(jaccard_index(level_mask(p, *m), level_mask(q, *m)));
    }
    case MetricKind::KSDeltaMax:
      throw ParameterError("ks_delta_max compares two anticipated joints; use delta_max");
  }
  throw ParameterError("unknown metric kind");
}

/// max(A_yx) - max(A_xy).
template <typename Scalar>
Scalar delta_max(const AnticipatedJoint<Scalar>& a_xy, const AnticipatedJoint<Scalar>& a_yx) {
  if (a_xy.dist.k() != a_yx.dist.k()) throw DimensionError("grid size mismatch");
  return a_yx.dist.mass.maxCoeff() - a_xy.dist.mass.maxCoeff();
}

}  // namespace causaldir
