#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "causaldir/classify.hpp"
#include "causaldir/evalbench.hpp"

namespace causaldir {

/// Shortest round-trip decimal form.
std::string format_number(double v);

/// Leading comment lines of every CSV report: the command and the effective
/// configuration JSON.
void write_csv_header(std::ostream& os, std::string_view command, const std::string& config_json);

inline constexpr const char* kDecisionColumns =
    "pair_id,method,metric,k,bw_par,m,gamma_star,delta,direction,truth,correct";

void write_decisions_csv(std::ostream& os, const RunRecord& record);
void write_decisions_json(std::ostream& os, std::string_view command, const std::string& config_json,
                          const RunRecord& record);

void write_runs_csv(std::ostream& os, const std::vector<RunRecord>& records);
void write_runs_json(std::ostream& os, std::string_view command, const std::string& config_json,
                     const std::vector<RunRecord>& records);

/// Corner cell names both axes ("k\bw_par"); the first row holds the column
/// levels and the first column the row levels.
void write_accuracy_map_csv(std::ostream& os, const AccuracyMap& map);

struct FeatureRow {
  int pair_id = 0;
  ScreeningFeatures features;
  ScreenVerdict verdict = ScreenVerdict::Decisive;
};

void write_features_csv(std::ostream& os, const std::vector<FeatureRow>& rows);
void write_features_json(std::ostream& os, std::string_view command, const std::string& config_json,
                         const std::vector<FeatureRow>& rows);

struct BenchSummary {
  std::string selector;
  std::size_t pairs = 0;
  double accuracy = 0;
  std::optional<double> auc;
  std::vector<int> misclassified;
  std::vector<int> flagged;
  std::optional<double> screened_accuracy;
};

void write_bench_summary_json(std::ostream& os, std::string_view command,
                              const std::string& config_json, const BenchSummary& s);

struct TuneSummary {
  std::string selector;
  std::size_t runs = 0;
  RunRecord best;
  SweepStats stats;
  std::optional<double> best_auc;
};

void write_tune_summary_json(std::ostream& os, std::string_view command,
                             const std::string& config_json, const std::vector<TuneSummary>& s);

/// One summary line: method, metric, accuracy, k, bw_par, m, gamma*.
std::string table_row(const RunRecord& best);

}  // namespace causaldir
