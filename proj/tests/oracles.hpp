#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "causaldir/monotonicity.hpp"

// Literal loop implementations shared by the unit and acceptance suites.
namespace causaldir::testing {

inline double kl_oracle(const Eigen::MatrixXd& p, const Eigen::MatrixXd& q) {
  double total = 0;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      if (p(i, j) == 0) continue;
      const double qq = q(i, j) == 0 ? 1e-12 : q(i, j);
      total += p(i, j) * (std::log(p(i, j)) - std::log(qq));
    }
  }
  return total;
}

inline int sign_of(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

using Table = std::vector<std::vector<double>>;

// Gradient along the first index of t[a][b], index spacing.
inline Table gradient_first(const Table& t) {
  const std::size_t k = t.size();
  Table g(k, std::vector<double>(k));
  for (std::size_t b = 0; b < k; ++b) {
    for (std::size_t a = 0; a < k; ++a) {
      if (a == 0)
        g[a][b] = t[1][b] - t[0][b];
      else if (a == k - 1)
        g[a][b] = t[k - 1][b] - t[k - 2][b];
      else
        g[a][b] = (t[a + 1][b] - t[a - 1][b]) / 2;
    }
  }
  return g;
}

struct OracleResult {
  double mi_x;
  double mi_y;
};

// Literal loop evaluation of both indexes.
inline OracleResult monotonicity_oracle(const Table& p, Regularization reg, double gamma_star) {
  const std::size_t k = p.size();
  std::vector<double> phi_x(k, 0.0), phi_y(k, 0.0);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < k; ++i) {
      phi_x[i] += p[i][j];
      phi_y[j] += p[i][j];
    }
  Table pt(k, std::vector<double>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) pt[j][i] = p[i][j];
  const Table gx = gradient_first(p);   // gx[i][j]
  const Table gyt = gradient_first(pt); // gyt[j][i]

  auto weight = [&](double a, double b, double phi) {
    if (sign_of(a) == sign_of(b)) return 0.0;
    const double gamma = 0.5 * (std::abs(b) + std::abs(a));
    if (reg == Regularization::Weighted) return phi * gamma;
    return gamma - gamma_star > 0 ? phi : 0.0;
  };
  OracleResult r{0, 0};
  for (std::size_t i = 0; i + 1 < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const double w = weight(gx[i][j], gx[i + 1][j], phi_x[i]);
      if (w != 0) r.mi_x += w;
    }
  for (std::size_t j = 0; j + 1 < k; ++j)
    for (std::size_t i = 0; i < k; ++i) {
      const double w = weight(gyt[j][i], gyt[j + 1][i], phi_y[j]);
      if (w != 0) r.mi_y += w;
    }
  return r;
}

}  // namespace causaldir::testing
