#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "causaldir/classify.hpp"
#include "causaldir/evalbench.hpp"

namespace causaldir {

enum class OutputFormat { Csv, Json };

std::string_view to_string(OutputFormat f);
OutputFormat parse_format(std::string_view s);

/// Everything a CLI run needs. Defaults reproduce the tuned AAG-Pearson
/// benchmark run.
struct RunConfig {
  std::filesystem::path data_dir = "data/tuebingen";
  std::optional<std::filesystem::path> meta;  // data_dir/pairmeta.txt when unset
  std::set<int> exclude = default_exclusions();
  std::optional<int> max_id;

  MethodSelector selector = MethodSelector::aag(MetricKind::PearsonDist);
  int k = 25;
  double bw_par = 0.175;
  int m = 7;                    // used by the jaccard metric only
  double gamma_star = 1.5e-11;  // used by zone regularization only

  DoeDesign design = DoeDesign::defaults();

  bool screen = false;
  std::vector<ScreenRule> rules = default_screen_rules();
  ScreeningParams screening;

  std::filesystem::path out_dir = "out";
  OutputFormat format = OutputFormat::Csv;
  unsigned workers = 1;
  bool weighted = false;
  std::uint64_t seed = 1;

  std::filesystem::path meta_path() const { return meta ? *meta : data_dir / "pairmeta.txt"; }

  /// The classifier hyperparameters implied by `selector`.
  HyperParams hyperparams() const;

  /// Throws ConfigError / ParameterError on invalid combinations.
  void validate() const;
};

/// Parses a JSON config. Unknown keys anywhere raise ConfigError.
RunConfig parse_config(std::string_view json_text, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

/// The effective configuration as canonical JSON (sorted keys, one line).
/// The worker count is left out so reports do not depend on it.
std::string config_json(const RunConfig& cfg);

/// "aag/pearson" style selector strings.
MethodSelector parse_selector(std::string_view label);

}  // namespace causaldir
