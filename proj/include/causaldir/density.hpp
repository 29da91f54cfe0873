#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <ostream>
#include <string>

#include "causaldir/ingest.hpp"
#include "causaldir/types.hpp"

namespace causaldir {

template <typename Scalar>
using GridMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using GridVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// k evenly spaced coordinates (i / (k-1)) covering [0,1] inclusive.
template <typename Scalar = double>
GridVector<Scalar> grid_coords(Eigen::Index k) {
  GridVector<Scalar> c(k);
  for (Eigen::Index i = 0; i < k; ++i) c[i] = Scalar(i) / Scalar(k - 1);
  return c;
}

/// Probability mass on a k x k grid; mass(i, j) belongs to (X_i, Y_j).
template <typename Scalar = double>
struct GridDistribution {
  GridMatrix<Scalar> mass;

  Eigen::Index k() const { return mass.rows(); }
  GridVector<Scalar> x_coords() const { return grid_coords<Scalar>(k()); }
  GridVector<Scalar> y_coords() const { return grid_coords<Scalar>(k()); }
};

template <typename Scalar>
GridDistribution<Scalar> transpose(const GridDistribution<Scalar>& g) {
  return {g.mass.transpose()};
}

/// Row i of `slices` is the conditional distribution at coordinate i of the
/// conditioning axis; `slice_mass` is the matching marginal.
template <typename Scalar = double>
struct ConditionalSlices {
  Axis axis = Axis::GivenX;
  GridMatrix<Scalar> slices;
  GridVector<Scalar> slice_mass;
};

template <typename Scalar = double>
struct Marginals {
  GridVector<Scalar> phi_x;
  GridVector<Scalar> phi_y;
};

struct KdeInfo {
  bool regularized = false;
};

/// Gaussian KDE with kernel covariance bw_par^2 * S (S the n-1 sample
/// covariance), evaluated on the k x k grid and scaled to unit total mass.
template <typename Scalar = double>
GridDistribution<Scalar> fit_joint(const PairSample& pair, int k, double bw_par,
                                   KdeInfo* info = nullptr) {
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  if (k < 3) throw ParameterError("grid size k must be >= 3");
  if (!(bw_par > 0)) throw ParameterError("bw_par must be positive");
  const Eigen::Index n = pair.size();
  if (n < 2 || pair.y.size() != n) throw DimensionError("pair needs >= 2 matched observations");

  const Scalar mx = Scalar(pair.x.mean());
  const Scalar my = Scalar(pair.y.mean());
  Scalar sxx = 0, syy = 0, sxy = 0;
  for (Eigen::Index s = 0; s < n; ++s) {
    const Scalar dx = Scalar(pair.x[s]) - mx;
    const Scalar dy = Scalar(pair.y[s]) - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  sxx /= Scalar(n - 1);
  syy /= Scalar(n - 1);
  sxy /= Scalar(n - 1);
  if (!(sxx > 0) || !(syy > 0) || !(sxx * syy - sxy * sxy > Scalar(1e-12) * sxx * syy)) {
    sxx += Scalar(1e-12);
    syy += Scalar(1e-12);
    if (info) info->regularized = true;
  }
  const Scalar bw2 = Scalar(bw_par) * Scalar(bw_par);
  const Scalar hxx = bw2 * sxx, hyy = bw2 * syy, hxy = bw2 * sxy;
  const Scalar det = hxx * hyy - hxy * hxy;
  if (!(det > 0)) throw DegeneratePairError("pair " + std::to_string(pair.id) + ": singular kernel");
  // Cholesky factor of H: the exponent is -(u^2 + v^2)/2 with u = dx/l11 and
  // v = (dy - l21 u)/l22, which stays accurate for nearly collinear data.
  const Scalar l11 = std::sqrt(hxx);
  const Scalar l21 = hxy / l11;
  const Scalar l22 = std::sqrt(det / hxx);

  // Exponents below this bound are dropped; exp(-700) is far below the
  // rounding of any surviving cell.
  constexpr Scalar kFloor = 700;
  const Scalar rx = std::sqrt(2 * kFloor * hxx);
  const Scalar ry = std::sqrt(2 * kFloor * hyy);
  const Scalar step = Scalar(k - 1);
  const GridVector<Scalar> coords = grid_coords<Scalar>(k);
  const Array grid = coords.array();

  auto window = [&](Scalar centre, Scalar radius, Eigen::Index& lo, Eigen::Index& hi) {
    lo = static_cast<Eigen::Index>(std::max<Scalar>(0, std::ceil((centre - radius) * step)));
    hi = static_cast<Eigen::Index>(std::min<Scalar>(step, std::floor((centre + radius) * step)));
  };

  GridMatrix<Scalar> acc = GridMatrix<Scalar>::Zero(k, k);
  Array u(k), a(k), shift(k);
  for (Eigen::Index s = 0; s < n; ++s) {
    const Scalar xs = Scalar(pair.x[s]);
    const Scalar ys = Scalar(pair.y[s]);
    Eigen::Index i0, i1, j0, j1;
    window(xs, rx, i0, i1);
    window(ys, ry, j0, j1);
    if (i0 > i1 || j0 > j1) continue;
    const Eigen::Index len = i1 - i0 + 1;
    u.head(len) = (grid.segment(i0, len) - xs) / l11;
    a.head(len) = Scalar(-0.5) * u.head(len).square();
    shift.head(len) = l21 * u.head(len);
    for (Eigen::Index j = j0; j <= j1; ++j) {
      const Scalar dy = coords[j] - ys;
      acc.col(j).segment(i0, len).array() +=
          (a.head(len) - Scalar(0.5) * ((dy - shift.head(len)) / l22).square()).exp();
    }
  }
  const Scalar total = acc.sum();
  if (!(total > 0) || !std::isfinite(total))
    throw DegeneratePairError("pair " + std::to_string(pair.id) + ": density underflow on grid");
  return {acc / total};
}

namespace detail {

/// Row sums accumulated left to right, so that the sums of a matrix and the
/// column sums of its transpose agree bit for bit.
template <typename Scalar>
GridVector<Scalar> row_sums(const GridMatrix<Scalar>& m) {
  GridVector<Scalar> out = GridVector<Scalar>::Zero(m.rows());
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) out[i] += m(i, j);
  return out;
}

template <typename Scalar>
GridVector<Scalar> col_sums(const GridMatrix<Scalar>& m) {
  GridVector<Scalar> out = GridVector<Scalar>::Zero(m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) out[j] += m(i, j);
  return out;
}

}  // namespace detail

template <typename Scalar>
Marginals<Scalar> marginals(const GridDistribution<Scalar>& joint) {
  return {detail::row_sums(joint.mass), detail::col_sums(joint.mass)};
}

/// Normalized conditional slices. A slice with zero marginal becomes the
/// uniform vector; its zero slice_mass removes it from any reconstruction.
template <typename Scalar>
ConditionalSlices<Scalar> conditionals(const GridDistribution<Scalar>& joint, Axis axis) {
  const Eigen::Index k = joint.k();
  const auto marg = marginals(joint);
  ConditionalSlices<Scalar> out;
  out.axis = axis;
  if (axis == Axis::GivenX) {
    out.slices = joint.mass;
    out.slice_mass = marg.phi_x;
  } else {
    out.slices = joint.mass.transpose();
    out.slice_mass = marg.phi_y;
  }
  for (Eigen::Index i = 0; i < k; ++i) {
    if (out.slice_mass[i] > 0)
      out.slices.row(i) /= out.slice_mass[i];
    else
      out.slices.row(i).setConstant(Scalar(1) / Scalar(k));
  }
  return out;
}

/// CSV with k rows (fixed X_i) of k comma-separated masses.
template <typename Scalar>
void write_grid_csv(std::ostream& os, const GridDistribution<Scalar>& g) {
  const Eigen::IOFormat fmt(Eigen::FullPrecision, Eigen::DontAlignCols, ",", "\n");
  os << g.mass.format(fmt) << '\n';
}

}  // namespace causaldir
