// causaldir: command-line front end (classify, bench, tune, screen).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "causaldir/classify.hpp"
#include "causaldir/config.hpp"
#include "causaldir/evalbench.hpp"
#include "causaldir/ingest.hpp"
#include "causaldir/report.hpp"

namespace fs = std::filesystem;
using namespace causaldir;

namespace {

struct Overrides {
  std::string config;
  std::string data, meta, method, metric, regularization, out, format;
  std::optional<int> k, m, max_id;
  std::optional<double> bw, gamma_star;
  std::vector<int> exclude;
  bool exclude_set = false;
  std::optional<bool> screen;
  std::optional<unsigned> workers;
  std::optional<std::uint64_t> seed;
  bool weighted = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--data", o.data, "directory with pairNNNN.txt files");
  cmd->add_option("--meta", o.meta, "metadata file (default <data>/pairmeta.txt)");
  cmd->add_option("--method", o.method, "aag | monot");
  cmd->add_option("--metric", o.metric, "AAG deviation metric");
  cmd->add_option("--regularization", o.regularization, "weighted | zone");
  cmd->add_option("--k", o.k, "grid size");
  cmd->add_option("--bw", o.bw, "bandwidth factor bw_par");
  cmd->add_option("--m", o.m, "Lebesgue level for the jaccard metric");
  cmd->add_option("--gamma-star", o.gamma_star, "insensitive zone for zone regularization");
  cmd->add_option("--max-id", o.max_id, "ignore pairs with a larger id");
  cmd->add_option("--exclude", o.exclude, "pair ids to drop (replaces the default list)")
      ->delimiter(',')
      ->each([&o](const std::string&) { o.exclude_set = true; });
  cmd->add_flag_function(
      "--screen,!--no-screen", [&o](std::int64_t n) { o.screen = n > 0; },
      "run the screening pre-pass");
  cmd->add_option("--workers", o.workers, "worker threads");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--format", o.format, "csv | json");
  cmd->add_option("--seed", o.seed, "seed for synthetic pairs");
  cmd->add_flag("--weighted", o.weighted, "weight accuracy by the benchmark pair weights");
}

RunConfig effective_config(const Overrides& o) {
  RunConfig cfg;
  if (!o.config.empty()) cfg = load_config(o.config);
  if (!o.data.empty()) cfg.data_dir = o.data;
  if (!o.meta.empty()) cfg.meta = o.meta;
  if (!o.method.empty()) {
    const Method m = parse_method(o.method);
    if (m != cfg.selector.method)
      cfg.selector = m == Method::AAG ? MethodSelector::aag(MetricKind::PearsonDist)
                                      : MethodSelector::monotonicity(Regularization::Zone);
  }
  if (!o.metric.empty()) {
    if (cfg.selector.method != Method::AAG) throw ConfigError("--metric only applies to --method aag");
    cfg.selector.metric = parse_metric(o.metric);
  }
  if (!o.regularization.empty()) {
    if (cfg.selector.method != Method::Monotonicity)
      throw ConfigError("--regularization only applies to --method monot");
    cfg.selector.regularization = parse_regularization(o.regularization);
  }
  if (o.k) cfg.k = *o.k;
  if (o.bw) cfg.bw_par = *o.bw;
  if (o.m) cfg.m = *o.m;
  if (o.gamma_star) cfg.gamma_star = *o.gamma_star;
  if (o.max_id) cfg.max_id = *o.max_id;
  if (o.exclude_set) cfg.exclude = std::set<int>(o.exclude.begin(), o.exclude.end());
  if (o.screen) cfg.screen = *o.screen;
  if (o.workers) cfg.workers = *o.workers;
  if (!o.out.empty()) cfg.out_dir = o.out;
  if (!o.format.empty()) cfg.format = parse_format(o.format);
  if (o.seed) cfg.seed = *o.seed;
  if (o.weighted) cfg.weighted = true;
  cfg.validate();
  return cfg;
}

std::vector<PairSample> load_benchmark(const RunConfig& cfg) {
  const auto metas = select_pairs(load_meta(cfg.meta_path()), cfg.exclude, cfg.max_id);
  if (metas.empty()) throw ConfigError("no pairs left after filtering");
  std::vector<PairSample> pairs;
  pairs.reserve(metas.size());
  for (const auto& m : metas) pairs.push_back(normalize(load_benchmark_pair(cfg.data_dir, m)));
  return pairs;
}

std::ofstream open_out(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  const fs::path path = cfg.out_dir / name;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write '" + path.string() + "'");
  return os;
}

std::string ext(const RunConfig& cfg) { return cfg.format == OutputFormat::Csv ? ".csv" : ".json"; }

DoeDesign single_design(const RunConfig& cfg) {
  DoeDesign d;
  d.k_levels = {cfg.k};
  d.bw_levels = {cfg.bw_par};
  d.m_levels = {cfg.m};
  d.gamma_levels = {cfg.gamma_star};
  d.methods = {cfg.selector};
  return d;
}

void emit_decisions(std::ostream& os, const RunConfig& cfg, std::string_view cmd, const RunRecord& r) {
  if (cfg.format == OutputFormat::Csv) {
    write_csv_header(os, cmd, config_json(cfg));
    write_decisions_csv(os, r);
  } else {
    write_decisions_json(os, cmd, config_json(cfg), r);
  }
}

std::vector<FeatureRow> screen_all(const std::vector<PairSample>& pairs, const RunConfig& cfg) {
  std::vector<FeatureRow> rows;
  rows.reserve(pairs.size());
  for (const auto& p : pairs) {
    FeatureRow row;
    row.pair_id = p.id;
    row.features = screening_features(p, cfg.screening);
    row.verdict = screen(row.features, cfg.rules);
    rows.push_back(row);
  }
  return rows;
}

std::optional<double> auc_of(const RunRecord& r) {
  std::vector<double> scores;
  std::vector<Direction> truths;
  for (const auto& d : r.decisions) {
    if (!d.truth) continue;
    scores.push_back(d.decision.delta);
    truths.push_back(*d.truth);
  }
  try {
    return roc_auc(scores, truths);
  } catch (const ScoringError&) {
    return std::nullopt;
  }
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * v);
  return buf;
}

struct ClassifyArgs {
  std::optional<int> id;
  std::string file;
  int x_col = 1;
  int y_col = 2;
  std::string synthetic;
  int n = 500;
  double noise_sd = 0.05;
};

int cmd_classify(const RunConfig& cfg, const ClassifyArgs& a) {
  const int sources = (a.id ? 1 : 0) + (a.file.empty() ? 0 : 1) + (a.synthetic.empty() ? 0 : 1);
  if (sources != 1) throw ConfigError("classify needs exactly one of --id, --file, --synthetic");
  PairSample pair;
  if (a.id) {
    const auto metas = load_meta(cfg.meta_path());
    auto it = std::find_if(metas.begin(), metas.end(), [&](const auto& m) { return m.id == *a.id; });
    if (it == metas.end()) throw ConfigError("pair " + std::to_string(*a.id) + " not in metadata");
    pair = load_benchmark_pair(cfg.data_dir, *it);
  } else if (!a.file.empty()) {
    pair = load_pair(a.file, a.x_col, a.y_col);
  } else {
    pair = generate_synthetic(cfg.seed, a.n, parse_mechanism(a.synthetic), a.noise_sd);
  }
  pair = normalize(pair);

  const HyperParams hp = cfg.hyperparams();
  RunRecord r;
  r.selector = cfg.selector;
  r.hyperparams = hp;
  PairDecision d;
  d.pair_id = pair.id;
  d.decision = classify(cfg.selector.method, pair, hp);
  d.truth = pair.truth;
  d.weight = pair.weight;
  d.correct = d.truth && d.decision.direction == *d.truth;
  r.decisions.push_back(d);
  r.accuracy = score_accuracy(r.decisions, cfg.weighted);
  emit_decisions(std::cout, cfg, "classify", r);
  return 0;
}

int cmd_bench(const RunConfig& cfg) {
  const auto pairs = load_benchmark(cfg);
  const auto records = run_doe(pairs, single_design(cfg), {cfg.workers, cfg.weighted});
  const RunRecord& r = records.front();

  BenchSummary s;
  s.selector = cfg.selector.label();
  s.pairs = pairs.size();
  s.accuracy = r.accuracy;
  s.auc = auc_of(r);
  for (const auto& d : r.decisions)
    if (!d.correct) s.misclassified.push_back(d.pair_id);

  if (cfg.screen) {
    const auto rows = screen_all(pairs, cfg);
    std::set<int> flagged;
    for (const auto& row : rows)
      if (row.verdict == ScreenVerdict::Indecisive) flagged.insert(row.pair_id);
    std::vector<PairDecision> kept;
    for (const auto& d : r.decisions)
      if (!flagged.contains(d.pair_id)) kept.push_back(d);
    s.flagged.assign(flagged.begin(), flagged.end());
    s.screened_accuracy = score_accuracy(kept, cfg.weighted);
  }

  {
    auto os = open_out(cfg, "decisions" + ext(cfg));
    emit_decisions(os, cfg, "bench", r);
  }
  {
    auto os = open_out(cfg, "summary.json");
    write_bench_summary_json(os, "bench", config_json(cfg), s);
  }
  std::cout << "selector: " << s.selector << "\npairs: " << s.pairs
            << "\naccuracy: " << percent(s.accuracy)
            << "\nauc: " << (s.auc ? format_number(*s.auc) : std::string("undefined")) << '\n';
  if (s.screened_accuracy) {
    std::cout << "flagged:";
    for (int id : s.flagged) std::cout << ' ' << id;
    std::cout << "\nscreened accuracy: " << percent(*s.screened_accuracy) << " on "
              << s.pairs - s.flagged.size() << " pairs\n";
  }
  return 0;
}

int cmd_tune(const RunConfig& cfg) {
  const auto pairs = load_benchmark(cfg);
  const auto records = run_doe(pairs, cfg.design, {cfg.workers, cfg.weighted});
  {
    auto os = open_out(cfg, "runs" + ext(cfg));
    if (cfg.format == OutputFormat::Csv) {
      write_csv_header(os, "tune", config_json(cfg));
      write_runs_csv(os, records);
    } else {
      write_runs_json(os, "tune", config_json(cfg), records);
    }
  }
  std::vector<TuneSummary> summaries;
  for (std::size_t mi = 0; mi < cfg.design.methods.size(); ++mi) {
    std::vector<RunRecord> mine;
    for (const auto& r : records)
      if (r.index.method == mi) mine.push_back(r);
    TuneSummary t;
    t.selector = cfg.design.methods[mi].label();
    t.runs = mine.size();
    t.best = best_run(mine);
    t.stats = sweep_stats(mine);
    t.best_auc = auc_of(t.best);

    std::vector<RunRecord> slice;
    for (const auto& r : mine)
      if (r.index.m == t.best.index.m && r.index.gamma == t.best.index.gamma) slice.push_back(r);
    const auto map = accuracy_map(slice, Factor::K, Factor::BwPar);
    std::string name = "accuracy_map_" + t.selector + ".csv";
    std::replace(name.begin(), name.end(), '/', '_');
    auto os = open_out(cfg, name);
    write_accuracy_map_csv(os, map);
    summaries.push_back(std::move(t));
  }
  {
    auto os = open_out(cfg, "summary.json");
    write_tune_summary_json(os, "tune", config_json(cfg), summaries);
  }
  for (const auto& t : summaries) {
    std::cout << table_row(t.best) << '\n'
              << "  runs " << t.runs << ", lcl5 " << percent(t.stats.lcl5) << ", median "
              << percent(t.stats.median) << ", ucl95 " << percent(t.stats.ucl95) << '\n';
  }
  return 0;
}

int cmd_screen(const RunConfig& cfg) {
  const auto pairs = load_benchmark(cfg);
  const auto rows = screen_all(pairs, cfg);
  {
    auto os = open_out(cfg, "features" + ext(cfg));
    if (cfg.format == OutputFormat::Csv) {
      write_csv_header(os, "screen", config_json(cfg));
      write_features_csv(os, rows);
    } else {
      write_features_json(os, "screen", config_json(cfg), rows);
    }
  }
  auto os = open_out(cfg, "flagged.csv");
  write_csv_header(os, "screen", config_json(cfg));
  os << "pair_id\n";
  std::cout << "flagged:";
  for (const auto& r : rows) {
    if (r.verdict != ScreenVerdict::Indecisive) continue;
    os << r.pair_id << '\n';
    std::cout << ' ' << r.pair_id;
  }
  std::cout << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Causal direction of cause-effect pairs via anticipated asymmetric geometries"};
  app.require_subcommand(1);

  Overrides o;
  ClassifyArgs ca;
  auto* classify_cmd = app.add_subcommand("classify", "classify one pair");
  add_common(classify_cmd, o);
  classify_cmd->add_option("--id", ca.id, "benchmark pair id");
  classify_cmd->add_option("--file", ca.file, "whitespace-separated pair file");
  classify_cmd->add_option("--x-col", ca.x_col, "1-based x column of --file");
  classify_cmd->add_option("--y-col", ca.y_col, "1-based y column of --file");
  classify_cmd->add_option("--synthetic", ca.synthetic, "quadratic | sine | sigmoid");
  classify_cmd->add_option("--n", ca.n, "synthetic sample size");
  classify_cmd->add_option("--noise-sd", ca.noise_sd, "synthetic noise standard deviation");

  auto* bench_cmd = app.add_subcommand("bench", "score one configuration on the benchmark");
  add_common(bench_cmd, o);
  auto* tune_cmd = app.add_subcommand("tune", "full factorial sweep");
  add_common(tune_cmd, o);
  auto* screen_cmd = app.add_subcommand("screen", "screening features and flagged pairs");
  add_common(screen_cmd, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    const RunConfig cfg = effective_config(o);
    if (classify_cmd->parsed()) return cmd_classify(cfg, ca);
    if (bench_cmd->parsed()) return cmd_bench(cfg);
    if (tune_cmd->parsed()) return cmd_tune(cfg);
    return cmd_screen(cfg);
  } catch (const DegeneratePairError& e) {
    std::cerr << "causaldir: degenerate pair: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "causaldir: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "causaldir: " << e.what() << '\n';
    return 1;
  }
}
