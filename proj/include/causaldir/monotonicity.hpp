#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string_view>

#include "causaldir/density.hpp"

namespace causaldir {

enum class GradientAxis { X, Y };

/// Gradient of a grid along one axis, in index-spacing units.
template <typename Scalar = double>
struct GradientField {
  GradientAxis axis = GradientAxis::X;
  GridMatrix<Scalar> values;
};

enum class Regularization { Weighted, Zone };

std::string_view to_string(Regularization r);
Regularization parse_regularization(std::string_view name);

template <typename Scalar = double>
struct MonotonicityResult {
  Scalar mi_x = 0;
  Scalar mi_y = 0;
  Regularization regularization = Regularization::Weighted;
  std::optional<Scalar> gamma_star;
};

namespace detail {

/// Central differences inside, one-sided on the two boundary lines, along
/// the rows of `m` (axis 0).
template <typename Derived>
auto row_gradient(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index k = m.rows();
  GridMatrix<Scalar> g(k, m.cols());
  g.row(0) = m.row(1) - m.row(0);
  g.row(k - 1) = m.row(k - 1) - m.row(k - 2);
  if (k > 2) g.middleRows(1, k - 2) = (m.bottomRows(k - 2) - m.topRows(k - 2)) / Scalar(2);
  return g;
}

template <typename Scalar>
int sgn(Scalar v) {
  return (Scalar(0) < v) - (v < Scalar(0));
}

/// Sum over (i, i+1, j) of marginal[i] * weight(gamma) * [sign change],
/// traversing axis 0 of `g`; terms are added one by one in (i, j) order.
template <typename Scalar>
Scalar weighted_sign_changes(const GridMatrix<Scalar>& g, const GridVector<Scalar>& marginal,
                             Regularization reg, Scalar gamma_star) {
  Scalar total = 0;
  for (Eigen::Index i = 0; i + 1 < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      const Scalar lo = g(i, j);
      const Scalar hi = g(i + 1, j);
      if (sgn(lo) == sgn(hi)) continue;
      const Scalar gamma = Scalar(0.5) * (std::abs(hi) + std::abs(lo));
      if (reg == Regularization::Weighted)
        total += marginal[i] * gamma;
      else if (gamma - gamma_star > 0)
        total += marginal[i];
    }
  }
  return total;
}

}  // namespace detail

template <typename Scalar>
GradientField<Scalar> gradient_field(const GridDistribution<Scalar>& p, GradientAxis axis) {
  if (p.k() < 3) throw ParameterError("gradient needs k >= 3");
  GradientField<Scalar> out;
  out.axis = axis;
  if (axis == GradientAxis::X)
    out.values = detail::row_gradient(p.mass);
  else
    out.values = detail::row_gradient(p.mass.transpose()).transpose();
  return out;
}

/// Weighted counts of gradient sign changes along X (MI_X) and Y (MI_Y).
/// A change is any difference in sgn, so moving into or out of an exact
/// zero counts.
template <typename Scalar>
MonotonicityResult<Scalar> monotonicity_indexes(const GridDistribution<Scalar>& p,
                                                Regularization reg,
                                                std::optional<Scalar> gamma_star = std::nullopt) {
  if (reg == Regularization::Zone && !gamma_star)
    throw ParameterError("zone regularization needs gamma_star");
  const Scalar gs = gamma_star.value_or(Scalar(0));
  const auto marg = marginals(p);
  const auto gx = gradient_field(p, GradientAxis::X);
  const auto gy = gradient_field(p, GradientAxis::Y);
  MonotonicityResult<Scalar> out;
  out.regularization = reg;
  if (reg == Regularization::Zone) out.gamma_star = gs;
  out.mi_x = detail::weighted_sign_changes<Scalar>(gx.values, marg.phi_x, reg, gs);
  const GridMatrix<Scalar> gyt = gy.values.transpose();
  out.mi_y = detail::weighted_sign_changes<Scalar>(gyt, marg.phi_y, reg, gs);
  return out;
}

}  // namespace causaldir
