#include "causaldir/evalbench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <map>
#include <string>
#include <thread>

#include "causaldir/rank_stats.hpp"

namespace causaldir {

std::string MethodSelector::label() const {
  std::string out(to_string(method));
  out += '/';
  if (method == Method::AAG)
    out += metric ? to_string(*metric) : "?";
  else
    out += regularization ? to_string(*regularization) : "?";
  return out;
}

std::vector<double> level_range(double lo, double hi, int count, bool log_scale) {
  if (count < 1) throw ConfigError("level count must be >= 1");
  if (log_scale && !(lo > 0 && hi > 0)) throw ConfigError("log-spaced levels must be positive");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    const double v = log_scale ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)))
                               : lo + t * (hi - lo);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    out.push_back(std::strtod(buf, nullptr));
  }
  return out;
}

DoeDesign DoeDesign::defaults() {
  DoeDesign d;
  for (int k = 20; k <= 65; k += 5) d.k_levels.push_back(k);
  d.bw_levels = level_range(0.025, 0.25, 10);
  d.m_levels = {5, 6, 7, 8, 9};
  d.gamma_levels = level_range(1e-11, 1e-7, 5, true);
  d.methods = {MethodSelector::aag(MetricKind::PearsonDist)};
  return d;
}

void DoeDesign::validate() const {
  if (k_levels.empty() || bw_levels.empty()) throw ConfigError("design needs k and bw_par levels");
  if (methods.empty()) throw ConfigError("design needs at least one method");
  for (int k : k_levels)
    if (k < 3) throw ConfigError("k level " + std::to_string(k) + " is below 3");
  for (double bw : bw_levels)
    if (!(bw > 0) || !std::isfinite(bw)) throw ConfigError("bw_par levels must be positive");
  for (const auto& sel : methods) {
    if (sel.method == Method::AAG && !sel.metric) throw ConfigError("aag selector needs a metric");
    if (sel.method == Method::Monotonicity && !sel.regularization)
      throw ConfigError("monotonicity selector needs a regularization");
    if (sel.uses_m() && m_levels.empty()) throw ConfigError("jaccard needs m levels");
    if (sel.uses_gamma() && gamma_levels.empty()) throw ConfigError("zone needs gamma_star levels");
  }
  for (int m : m_levels)
    if (m < 1 || m > 9) throw ConfigError("m level " + std::to_string(m) + " outside [1, 9]");
  for (double g : gamma_levels)
    if (!(g > 0) || !std::isfinite(g)) throw ConfigError("gamma_star levels must be positive");
}

std::string_view to_string(Factor f) {
  switch (f) {
    case Factor::K: return "k";
    case Factor::BwPar: return "bw_par";
    case Factor::M: return "m";
    case Factor::GammaStar: return "gamma_star";
  }
  return "k";
}

Factor parse_factor(std::string_view name) {
  if (name == "k") return Factor::K;
  if (name == "bw_par" || name == "bw") return Factor::BwPar;
  if (name == "m") return Factor::M;
  if (name == "gamma_star" || name == "gamma") return Factor::GammaStar;
  throw ConfigError("unknown factor '" + std::string(name) + "'");
}

std::optional<double> RunRecord::factor_value(Factor f) const {
  switch (f) {
    case Factor::K: return hyperparams.k;
    case Factor::BwPar: return hyperparams.bw_par;
    case Factor::M:
      return hyperparams.m ? std::optional<double>(*hyperparams.m) : std::nullopt;
    case Factor::GammaStar: return hyperparams.gamma_star;
  }
  return std::nullopt;
}

double score_accuracy(const std::vector<PairDecision>& decisions, bool weighted) {
  double hit = 0, total = 0;
  for (const auto& d : decisions) {
    if (!d.truth) continue;
    const double w = weighted ? d.weight : 1.0;
    total += w;
    if (d.correct) hit += w;
  }
  return total > 0 ? hit / total : 0.0;
}

namespace {

struct Combo {
  std::size_t method;
  std::size_t m;
  std::size_t gamma;
};

std::vector<Combo> combos_of(const DoeDesign& design) {
  std::vector<Combo> out;
  for (std::size_t mi = 0; mi < design.methods.size(); ++mi) {
    const auto& sel = design.methods[mi];
    if (sel.uses_m())
      for (std::size_t j = 0; j < design.m_levels.size(); ++j) out.push_back({mi, j, 0});
    else if (sel.uses_gamma())
      for (std::size_t j = 0; j < design.gamma_levels.size(); ++j) out.push_back({mi, 0, j});
    else
      out.push_back({mi, 0, 0});
  }
  return out;
}

HyperParams params_of(const DoeDesign& design, std::size_t ki, std::size_t bi, const Combo& c) {
  const auto& sel = design.methods[c.method];
  HyperParams hp;
  hp.k = design.k_levels[ki];
  hp.bw_par = design.bw_levels[bi];
  if (sel.method == Method::AAG) {
    hp.metric = *sel.metric;
    if (sel.uses_m()) hp.m = design.m_levels[c.m];
  } else {
    hp.regularization = sel.regularization;
    if (sel.uses_gamma()) hp.gamma_star = design.gamma_levels[c.gamma];
  }
  return hp;
}

// Decisions of one (k, bw) unit: [combo][pair].
using UnitResult = std::vector<std::vector<DirectionDecision>>;

UnitResult evaluate_unit(const std::vector<PairSample>& pairs, const DoeDesign& design,
                         std::size_t ki, std::size_t bi, const std::vector<Combo>& combos) {
  UnitResult out(combos.size(), std::vector<DirectionDecision>(pairs.size()));
  const bool any_aag = std::any_of(design.methods.begin(), design.methods.end(),
                                   [](const auto& s) { return s.method == Method::AAG; });
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto joint = fit_joint<double>(pairs[p], design.k_levels[ki], design.bw_levels[bi]);
    std::optional<AnticipatedJoint<double>> a_xy, a_yx;
    if (any_aag) {
      a_xy = anticipated_joint(joint, Direction::XtoY);
      a_yx = anticipated_joint(joint, Direction::YtoX);
    }
    for (std::size_t c = 0; c < combos.size(); ++c) {
      const HyperParams hp = params_of(design, ki, bi, combos[c]);
      if (design.methods[combos[c].method].method == Method::AAG)
        out[c][p] = decide_aag(joint, *a_xy, *a_yx, hp.metric, hp.m);
      else
        out[c][p] = monotonicity_decide(monotonicity_indexes(joint, *hp.regularization, hp.gamma_star));
    }
  }
  return out;
}

}  // namespace

std::vector<RunRecord> run_doe(const std::vector<PairSample>& pairs, const DoeDesign& design,
                               const RunOptions& options) {
  design.validate();
  for (const auto& p : pairs)
    if (!p.truth) throw ScoringError("pair " + std::to_string(p.id) + " has no ground truth");

  const auto combos = combos_of(design);
  const std::size_t nk = design.k_levels.size();
  const std::size_t nb = design.bw_levels.size();
  const std::size_t units = nk * nb;
  std::vector<UnitResult> results(units);
  std::vector<std::exception_ptr> errors(units);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t u = next++; u < units; u = next++) {
      try {
        results[u] = evaluate_unit(pairs, design, u / nb, u % nb, combos);
      } catch (...) {
        errors[u] = std::current_exception();
      }
    }
  };
  const unsigned workers =
      std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(units)));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<RunRecord> records;
  records.reserve(units * combos.size());
  for (std::size_t c = 0; c < combos.size(); ++c) {
    for (std::size_t u = 0; u < units; ++u) {
      RunRecord r;
      r.selector = design.methods[combos[c].method];
      r.index = {combos[c].method, u / nb, u % nb, combos[c].m, combos[c].gamma};
      r.hyperparams = params_of(design, u / nb, u % nb, combos[c]);
      r.decisions.reserve(pairs.size());
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        PairDecision d;
        d.pair_id = pairs[p].id;
        d.decision = results[u][c][p];
        d.truth = pairs[p].truth;
        d.weight = pairs[p].weight;
        d.correct = d.decision.direction == *d.truth;
        r.decisions.push_back(std::move(d));
      }
      r.accuracy = score_accuracy(r.decisions, options.weighted);
      records.push_back(std::move(r));
    }
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const RunRecord& a, const RunRecord& b) { return a.index < b.index; });
  return records;
}

const RunRecord& best_run(const std::vector<RunRecord>& records) {
  if (records.empty()) throw ScoringError("best_run of an empty record list");
  const RunRecord* best = &records.front();
  for (const auto& r : records) {
    if (r.accuracy > best->accuracy || (r.accuracy == best->accuracy && r.index < best->index))
      best = &r;
  }
  return *best;
}

double nearest_rank(std::vector<double> values, double p) {
  if (values.empty()) throw ScoringError("percentile of an empty list");
  if (!(p > 0 && p <= 100)) throw ParameterError("percentile must be in (0, 100]");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  auto rank = static_cast<std::size_t>(std::ceil(p * n / 100.0));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

SweepStats sweep_stats(const std::vector<RunRecord>& records) {
  if (records.empty()) throw ScoringError("sweep_stats of an empty record list");
  std::vector<double> acc;
  acc.reserve(records.size());
  for (const auto& r : records) acc.push_back(r.accuracy);
  SweepStats s;
  s.lcl5 = nearest_rank(acc, 5);
  s.median = nearest_rank(acc, 50);
  s.ucl95 = nearest_rank(acc, 95);
  s.interval = s.ucl95 - s.lcl5;
  return s;
}

double roc_auc(const std::vector<double>& scores, const std::vector<Direction>& truths) {
  if (scores.size() != truths.size() || scores.empty())
    throw ScoringError("roc_auc needs equally long non-empty score and truth lists");
  const Eigen::Map<const Eigen::VectorXd> s(scores.data(), static_cast<Eigen::Index>(scores.size()));
  const Eigen::VectorXd ranks = stats::average_ranks(s);
  double pos = 0, neg = 0, rank_sum = 0;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    if (truths[i] == Direction::XtoY) {
      pos += 1;
      rank_sum += ranks[static_cast<Eigen::Index>(i)];
    } else {
      neg += 1;
    }
  }
  if (pos == 0 || neg == 0) throw ScoringError("AUC is undefined when all truths share one class");
  return (rank_sum - pos * (pos + 1) / 2) / (pos * neg);
}

AccuracyMap accuracy_map(const std::vector<RunRecord>& records, Factor rows, Factor cols) {
  if (rows == cols) throw ScoringError("accuracy map needs two distinct factors");
  if (records.empty()) throw ScoringError("accuracy map of an empty record list");
  std::map<double, std::size_t> rl, cl;
  for (const auto& r : records) {
    const auto a = r.factor_value(rows);
    const auto b = r.factor_value(cols);
    if (!a || !b)
      throw ScoringError("records do not vary factor " + std::string(to_string(a ? cols : rows)));
    rl.emplace(*a, 0);
    cl.emplace(*b, 0);
  }
  AccuracyMap out;
  out.rows = rows;
  out.cols = cols;
  for (auto& [v, i] : rl) {
    i = out.row_levels.size();
    out.row_levels.push_back(v);
  }
  for (auto& [v, i] : cl) {
    i = out.col_levels.size();
    out.col_levels.push_back(v);
  }
  const auto nr = static_cast<Eigen::Index>(rl.size());
  const auto nc = static_cast<Eigen::Index>(cl.size());
  out.accuracy = Eigen::MatrixXd::Constant(nr, nc, std::nan(""));
  Eigen::MatrixXi seen = Eigen::MatrixXi::Zero(nr, nc);
  for (const auto& r : records) {
    const auto i = static_cast<Eigen::Index>(rl.at(*r.factor_value(rows)));
    const auto j = static_cast<Eigen::Index>(cl.at(*r.factor_value(cols)));
    if (seen(i, j)++) throw ScoringError("two records share an accuracy map cell; filter by method and fix the other factors");
    out.accuracy(i, j) = r.accuracy;
  }
  if ((seen.array() == 0).any()) throw ScoringError("records do not cover the full factorial of the map axes");
  return out;
}

}  // namespace causaldir
