#pragma once

#include <Eigen/Dense>

namespace causaldir::stats {

double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Average ranks (1-based); tied values share the mean of their ranks.
Eigen::VectorXd average_ranks(const Eigen::VectorXd& v);

double spearman(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Kendall tau-b in O(n log n) (Knight's merge-sort algorithm).
double kendall_tau_b(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Mutual information (nats) of the bins x bins equal-width histogram of
/// two samples lying in [0,1].
double histogram_mutual_information(const Eigen::VectorXd& a, const Eigen::VectorXd& b, int bins);

}  // namespace causaldir::stats
