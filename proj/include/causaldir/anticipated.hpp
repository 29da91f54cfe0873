#pragma once

#include <Eigen/Dense>

#include <cmath>

#include "causaldir/density.hpp"

namespace causaldir {

/// Per-slice mean and standard deviation of a set of conditional slices,
/// in grid-coordinate units.
template <typename Scalar = double>
struct DualResponse {
  Axis axis = Axis::GivenX;
  GridVector<Scalar> mu;
  GridVector<Scalar> sigma;
};

template <typename Scalar = double>
struct AnticipatedJoint {
  Direction direction = Direction::XtoY;
  GridDistribution<Scalar> dist;
};

template <typename Scalar>
DualResponse<Scalar> dual_response(const ConditionalSlices<Scalar>& cond,
                                   const GridVector<Scalar>& coords) {
  const Eigen::Index k = cond.slices.rows();
  if (coords.size() != cond.slices.cols()) throw DimensionError("coords/slice length mismatch");
  DualResponse<Scalar> out;
  out.axis = cond.axis;
  out.mu.resize(k);
  out.sigma.resize(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto s = cond.slices.row(i).transpose().array();
    const Scalar mu = (coords.array() * s).sum();
    const Scalar var = ((coords.array() - mu).square() * s).sum();
    out.mu[i] = mu;
    out.sigma[i] = std::sqrt(var);
  }
  return out;
}

/// Index of the coordinate nearest to `mu`; ties go to the lower index.
template <typename Scalar>
Eigen::Index nearest_coord(Scalar mu, const GridVector<Scalar>& coords) {
  Eigen::Index best = 0;
  Scalar best_d = std::abs(coords[0] - mu);
  for (Eigen::Index j = 1; j < coords.size(); ++j) {
    const Scalar d = std::abs(coords[j] - mu);
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return best;
}

/// Normal pdf sampled at the grid coordinates and normalized to unit sum.
/// sigma == 0 (or a fully underflowed pdf) gives a Dirac at the nearest
/// grid point.
template <typename Scalar>
GridVector<Scalar> decode_slice(Scalar mu, Scalar sigma, const GridVector<Scalar>& coords) {
  GridVector<Scalar> out = GridVector<Scalar>::Zero(coords.size());
  if (sigma > 0) {
    for (Eigen::Index j = 0; j < coords.size(); ++j) {
      const Scalar z = (coords[j] - mu) / sigma;
      out[j] = std::exp(Scalar(-0.5) * z * z);
    }
    const Scalar total = out.sum();
    if (total > 0 && std::isfinite(total)) return out / total;
    out.setZero();
  }
  out[nearest_coord(mu, coords)] = Scalar(1);
  return out;
}

/// Reassembles the joint from decoded conditionals: for X->Y each given-X
/// slice is replaced by its normal decode and re-weighted by phi_X; Y->X is
/// the mirror image conditioning on Y.
template <typename Scalar>
AnticipatedJoint<Scalar> anticipated_joint(const GridDistribution<Scalar>& joint,
                                           Direction direction) {
  if (direction == Direction::Undecided)
    throw ParameterError("anticipated joint needs a causal direction");
  const Axis axis = direction == Direction::XtoY ? Axis::GivenX : Axis::GivenY;
  const auto cond = conditionals(joint, axis);
  const GridVector<Scalar> coords = grid_coords<Scalar>(joint.k());
  const auto dr = dual_response(cond, coords);

  const Eigen::Index k = joint.k();
  GridMatrix<Scalar> rows(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    if (cond.slice_mass[i] > 0)
      rows.row(i) = decode_slice(dr.mu[i], dr.sigma[i], coords).transpose() * cond.slice_mass[i];
    else
      rows.row(i).setZero();
  }
  AnticipatedJoint<Scalar> out;
  out.direction = direction;
  out.dist.mass = axis == Axis::GivenX ? rows : GridMatrix<Scalar>(rows.transpose());
  return out;
}

}  // namespace causaldir
