#include "causaldir/rank_stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "causaldir/types.hpp"

namespace causaldir::stats {

double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw DimensionError("pearson: length mismatch");
  const double ma = a.mean();
  const double mb = b.mean();
  double sab = 0, saa = 0, sbb = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (!(saa > 0) || !(sbb > 0)) return 0.0;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

Eigen::VectorXd average_ranks(const Eigen::VectorXd& v) {
  const auto n = static_cast<std::size_t>(v.size());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto l, auto r) { return v[l] < v[r]; });
  Eigen::VectorXd ranks(v.size());
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && v[order[j]] == v[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j + 1);  // mean of i+1 .. j
    for (std::size_t t = i; t < j; ++t) ranks[order[t]] = avg;
    i = j;
  }
  return ranks;
}

double spearman(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return pearson(average_ranks(a), average_ranks(b));
}

namespace {

// Tied pairs summed over runs of equal values in an already sorted range.
template <typename Eq>
std::int64_t tied_pairs(std::size_t n, Eq&& equal) {
  std::int64_t total = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && equal(i, j)) ++j;
    const auto t = static_cast<std::int64_t>(j - i);
    total += t * (t - 1) / 2;
    i = j;
  }
  return total;
}

// Sorts `v` ascending and returns the number of strict inversions.
std::int64_t merge_count(std::vector<double>& v, std::vector<double>& buf, std::size_t lo,
                         std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = merge_count(v, buf, lo, mid) + merge_count(v, buf, mid, hi);
  std::size_t i = lo, j = mid, out = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += static_cast<std::int64_t>(mid - i);
      buf[out++] = v[j++];
    } else {
      buf[out++] = v[i++];
    }
  }
  while (i < mid) buf[out++] = v[i++];
  while (j < hi) buf[out++] = v[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
            buf.begin() + static_cast<std::ptrdiff_t>(hi), v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

}  // namespace

double kendall_tau_b(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw DimensionError("kendall: length mismatch");
  const auto n = static_cast<std::size_t>(a.size());
  if (n < 2) return 0.0;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto l, auto r) {
    return a[l] < a[r] || (a[l] == a[r] && b[l] < b[r]);
  });

  const std::int64_t ties_a =
      tied_pairs(n, [&](auto i, auto j) { return a[order[i]] == a[order[j]]; });
  const std::int64_t ties_ab = tied_pairs(n, [&](auto i, auto j) {
    return a[order[i]] == a[order[j]] && b[order[i]] == b[order[j]];
  });

  std::vector<double> bs(n), buf(n);
  for (std::size_t i = 0; i < n; ++i) bs[i] = b[order[i]];
  const std::int64_t swaps = merge_count(bs, buf, 0, n);
  const std::int64_t ties_b = tied_pairs(n, [&](auto i, auto j) { return bs[i] == bs[j]; });

  const auto n0 = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
  const double num = static_cast<double>(n0 - ties_a - ties_b + ties_ab - 2 * swaps);
  const double den = std::sqrt(static_cast<double>(n0 - ties_a) * static_cast<double>(n0 - ties_b));
  if (!(den > 0)) return 0.0;
  return std::clamp(num / den, -1.0, 1.0);
}

double histogram_mutual_information(const Eigen::VectorXd& a, const Eigen::VectorXd& b, int bins) {
  if (a.size() != b.size()) throw DimensionError("histogram MI: length mismatch");
  if (bins < 2) throw ParameterError("histogram MI needs bins >= 2");
  auto bin_of = [bins](double v) {
    const int i = static_cast<int>(std::floor(v * bins));
    return std::clamp(i, 0, bins - 1);
  };
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(bins, bins);
  for (Eigen::Index s = 0; s < a.size(); ++s) counts(bin_of(a[s]), bin_of(b[s])) += 1.0;
  const double n = static_cast<double>(a.size());
  Eigen::VectorXd ra = Eigen::VectorXd::Zero(bins), rb = Eigen::VectorXd::Zero(bins);
  for (int i = 0; i < bins; ++i)
    for (int j = 0; j < bins; ++j) {
      ra[i] += counts(i, j);
      rb[j] += counts(i, j);
    }
  double mi = 0;
  for (int i = 0; i < bins; ++i)
    for (int j = 0; j < bins; ++j) {
      const double c = counts(i, j);
      if (c > 0) mi += c / n * std::log(c * n / (ra[i] * rb[j]));
    }
  return std::max(0.0, mi);
}

}  // namespace causaldir::stats
