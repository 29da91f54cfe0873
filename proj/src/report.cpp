#include "causaldir/report.hpp"

#include <charconv>
#include <cstdio>

#include <json.hpp>

namespace causaldir {

using nlohmann::ordered_json;

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv_header(std::ostream& os, std::string_view command, const std::string& config_json) {
  os << "# causaldir " << command << '\n' << "# config: " << config_json << '\n';
}

namespace {

std::string metric_tag(const MethodSelector& sel) {
  if (sel.method == Method::AAG) return std::string(to_string(*sel.metric));
  return std::string(to_string(*sel.regularization));
}

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

std::string opt_int(const std::optional<int>& v) { return v ? std::to_string(*v) : ""; }

ordered_json number_or_null(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json with_header(std::string_view command, const std::string& config_json) {
  ordered_json j;
  j["command"] = command;
  j["config"] = ordered_json::parse(config_json);
  return j;
}

ordered_json decision_json(const RunRecord& r, const PairDecision& d) {
  const auto& hp = r.hyperparams;
  ordered_json row;
  row["pair_id"] = d.pair_id;
  row["method"] = to_string(r.selector.method);
  row["metric"] = metric_tag(r.selector);
  row["k"] = hp.k;
  row["bw_par"] = hp.bw_par;
  row["m"] = hp.m ? ordered_json(*hp.m) : ordered_json(nullptr);
  row["gamma_star"] = number_or_null(hp.gamma_star);
  row["delta"] = d.decision.delta;
  row["direction"] = to_string(d.decision.direction);
  row["truth"] = d.truth ? ordered_json(to_string(*d.truth)) : ordered_json(nullptr);
  row["correct"] = d.correct;
  return row;
}

ordered_json run_json(const RunRecord& r) {
  std::size_t hits = 0;
  for (const auto& d : r.decisions) hits += d.correct ? 1 : 0;
  ordered_json row;
  row["method"] = to_string(r.selector.method);
  row["metric"] = metric_tag(r.selector);
  row["k"] = r.hyperparams.k;
  row["bw_par"] = r.hyperparams.bw_par;
  row["m"] = r.hyperparams.m ? ordered_json(*r.hyperparams.m) : ordered_json(nullptr);
  row["gamma_star"] = number_or_null(r.hyperparams.gamma_star);
  row["accuracy"] = r.accuracy;
  row["pairs"] = r.decisions.size();
  row["correct"] = hits;
  return row;
}

}  // namespace

void write_decisions_csv(std::ostream& os, const RunRecord& r) {
  os << kDecisionColumns << '\n';
  const auto& hp = r.hyperparams;
  for (const auto& d : r.decisions) {
    os << d.pair_id << ',' << to_string(r.selector.method) << ',' << metric_tag(r.selector) << ','
       << hp.k << ',' << format_number(hp.bw_par) << ',' << opt_int(hp.m) << ','
       << opt_number(hp.gamma_star) << ',' << format_number(d.decision.delta) << ','
       << to_string(d.decision.direction) << ',' << (d.truth ? to_string(*d.truth) : "") << ','
       << (d.correct ? 1 : 0) << '\n';
  }
}

void write_decisions_json(std::ostream& os, std::string_view command, const std::string& config_json,
                          const RunRecord& record) {
  auto j = with_header(command, config_json);
  j["decisions"] = ordered_json::array();
  for (const auto& d : record.decisions) j["decisions"].push_back(decision_json(record, d));
  os << j.dump(2) << '\n';
}

void write_runs_csv(std::ostream& os, const std::vector<RunRecord>& records) {
  os << "method,metric,k,bw_par,m,gamma_star,accuracy,pairs,correct\n";
  for (const auto& r : records) {
    std::size_t hits = 0;
    for (const auto& d : r.decisions) hits += d.correct ? 1 : 0;
    os << to_string(r.selector.method) << ',' << metric_tag(r.selector) << ',' << r.hyperparams.k
       << ',' << format_number(r.hyperparams.bw_par) << ',' << opt_int(r.hyperparams.m) << ','
       << opt_number(r.hyperparams.gamma_star) << ',' << format_number(r.accuracy) << ','
       << r.decisions.size() << ',' << hits << '\n';
  }
}

void write_runs_json(std::ostream& os, std::string_view command, const std::string& config_json,
                     const std::vector<RunRecord>& records) {
  auto j = with_header(command, config_json);
  j["runs"] = ordered_json::array();
  for (const auto& r : records) j["runs"].push_back(run_json(r));
  os << j.dump(2) << '\n';
}

void write_accuracy_map_csv(std::ostream& os, const AccuracyMap& map) {
  os << to_string(map.rows) << '\\' << to_string(map.cols);
  for (double c : map.col_levels) os << ',' << format_number(c);
  os << '\n';
  for (std::size_t i = 0; i < map.row_levels.size(); ++i) {
    os << format_number(map.row_levels[i]);
    for (std::size_t j = 0; j < map.col_levels.size(); ++j)
      os << ',' << format_number(map.accuracy(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    os << '\n';
  }
}

void write_features_csv(std::ostream& os, const std::vector<FeatureRow>& rows) {
  os << "pair_id";
  for (const auto& n : ScreeningFeatures::names()) os << ',' << n;
  os << ",verdict\n";
  for (const auto& r : rows) {
    os << r.pair_id;
    for (const auto& n : ScreeningFeatures::names()) os << ',' << format_number(r.features.get(n));
    os << ',' << (r.verdict == ScreenVerdict::Indecisive ? "indecisive" : "decisive") << '\n';
  }
}

void write_features_json(std::ostream& os, std::string_view command, const std::string& config_json,
                         const std::vector<FeatureRow>& rows) {
  auto j = with_header(command, config_json);
  j["pairs"] = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json row;
    row["pair_id"] = r.pair_id;
    for (const auto& n : ScreeningFeatures::names()) row[n] = r.features.get(n);
    row["verdict"] = r.verdict == ScreenVerdict::Indecisive ? "indecisive" : "decisive";
    j["pairs"].push_back(row);
  }
  os << j.dump(2) << '\n';
}

void write_bench_summary_json(std::ostream& os, std::string_view command,
                              const std::string& config_json, const BenchSummary& s) {
  auto j = with_header(command, config_json);
  j["selector"] = s.selector;
  j["pairs"] = s.pairs;
  j["accuracy"] = s.accuracy;
  j["auc"] = number_or_null(s.auc);
  j["misclassified"] = s.misclassified;
  if (s.screened_accuracy) {
    j["flagged"] = s.flagged;
    j["screened_accuracy"] = *s.screened_accuracy;
  }
  os << j.dump(2) << '\n';
}

void write_tune_summary_json(std::ostream& os, std::string_view command,
                             const std::string& config_json, const std::vector<TuneSummary>& s) {
  auto j = with_header(command, config_json);
  j["methods"] = ordered_json::array();
  for (const auto& t : s) {
    ordered_json row;
    row["selector"] = t.selector;
    row["runs"] = t.runs;
    row["best"] = run_json(t.best);
    row["best_auc"] = number_or_null(t.best_auc);
    row["lcl5"] = t.stats.lcl5;
    row["median"] = t.stats.median;
    row["ucl95"] = t.stats.ucl95;
    row["interval"] = t.stats.interval;
    j["methods"].push_back(row);
  }
  os << j.dump(2) << '\n';
}

std::string table_row(const RunRecord& best) {
  const auto& hp = best.hyperparams;
  char acc[16];
  std::snprintf(acc, sizeof acc, "%.1f%%", 100.0 * best.accuracy);
  std::string out = std::string(to_string(best.selector.method)) + " | " + metric_tag(best.selector) +
                    " | " + acc + " | k=" + std::to_string(hp.k) +
                    " | bw_par=" + format_number(hp.bw_par);
  out += " | m=" + (hp.m ? std::to_string(*hp.m) : std::string("-"));
  out += " | gamma*=" + (hp.gamma_star ? format_number(*hp.gamma_star) : std::string("-"));
  return out;
}

}  // namespace causaldir
