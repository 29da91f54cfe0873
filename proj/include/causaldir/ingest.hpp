#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "causaldir/types.hpp"

namespace causaldir {

/// Raw bivariate observations of one cause-effect pair.
struct PairSample {
  int id = 0;
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  std::optional<Direction> truth;
  double weight = 1.0;

  Eigen::Index size() const { return x.size(); }
};

/// Inclusive, 1-based column range.
struct ColumnRange {
  int first = 1;
  int last = 1;
  int width() const { return last - first + 1; }
};

/// One line of the benchmark metadata file.
struct PairMeta {
  int id = 0;
  ColumnRange cause;
  ColumnRange effect;
  double weight = 1.0;

  bool scalar() const { return cause.width() == 1 && effect.width() == 1; }
  /// X->Y when the cause sits in an earlier column than the effect.
  Direction truth() const;
};

/// Reads whitespace-separated numeric columns; `x_col` and `y_col` are
/// 1-based. Blank lines are skipped; every other line must be numeric.
PairSample load_pair(const std::filesystem::path& path, int x_col, int y_col);

std::vector<PairMeta> load_meta(const std::filesystem::path& path);
std::vector<PairMeta> parse_meta(std::string_view text);
std::string format_meta(const std::vector<PairMeta>& metas);

const std::set<int>& default_exclusions();

/// Keeps scalar pairs not in `exclude_ids` and (optionally) with id <= max_id.
std::vector<PairMeta> select_pairs(const std::vector<PairMeta>& metas,
                                   const std::set<int>& exclude_ids,
                                   std::optional<int> max_id = std::nullopt);

/// Maps each coordinate affinely onto [0,1]. Throws DegeneratePairError if
/// either coordinate has zero range.
PairSample normalize(const PairSample& pair);

/// `pairNNNN.txt` inside `dir`.
std::filesystem::path pair_file(const std::filesystem::path& dir, int id);

/// Loads (column 1 -> x, column 2 -> y) and attaches truth/weight from meta.
PairSample load_benchmark_pair(const std::filesystem::path& dir, const PairMeta& meta);

enum class Mechanism { Quadratic, Sine, Sigmoid };

std::string_view to_string(Mechanism m);
Mechanism parse_mechanism(std::string_view s);

double apply_mechanism(Mechanism m, double x);

/// SplitMix64: a counter-based 64-bit generator. The state advances by a
/// fixed odd increment and each output is a bijective mix of the counter,
/// so streams are identical on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform on [0,1) with 53 random bits.
  double uniform();
  /// Standard normal via Box-Muller (one variate per two uniforms).
  double normal();

 private:
  std::uint64_t state_;
};

/// x ~ U[0,1], y = f(x) + N(0, noise_sd); truth X->Y. Requires n >= 50 and
/// noise_sd > 0.
PairSample generate_synthetic(std::uint64_t seed, int n, Mechanism mechanism, double noise_sd);

}  // namespace causaldir
