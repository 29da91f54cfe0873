#include "causaldir/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace causaldir {

using nlohmann::json;

std::string_view to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

OutputFormat parse_format(std::string_view s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw ConfigError("unknown output format '" + std::string(s) + "'");
}

MethodSelector parse_selector(std::string_view label) {
  const auto slash = label.find('/');
  if (slash == std::string_view::npos)
    throw ConfigError("method selector '" + std::string(label) + "' must look like aag/pearson");
  const Method method = parse_method(label.substr(0, slash));
  const auto rest = label.substr(slash + 1);
  if (method == Method::AAG) return MethodSelector::aag(parse_metric(rest));
  return MethodSelector::monotonicity(parse_regularization(rest));
}

HyperParams RunConfig::hyperparams() const {
  HyperParams hp;
  hp.k = k;
  hp.bw_par = bw_par;
  if (selector.method == Method::AAG) {
    hp.metric = selector.metric.value_or(MetricKind::PearsonDist);
    if (selector.uses_m()) hp.m = m;
  } else {
    hp.regularization = selector.regularization.value_or(Regularization::Zone);
    if (selector.uses_gamma()) hp.gamma_star = gamma_star;
  }
  return hp;
}

void RunConfig::validate() const {
  hyperparams().validate(selector.method);
  design.validate();
  validate_rules(rules);
  if (screening.bins < 2) throw ConfigError("screen.bins must be >= 2");
  if (screening.m < 1 || screening.m > 9) throw ConfigError("screen.m must be in [1, 9]");
  if (screening.k < 3 || !(screening.bw_par > 0)) throw ConfigError("invalid screening grid");
  if (workers < 1) throw ConfigError("workers must be >= 1");
}

namespace {

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get_as(const json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

template <typename T>
std::vector<T> levels(const json& v, const std::string& key) {
  if (v.is_array()) return get_as<std::vector<T>>(v, key);
  check_keys(v, {"min", "max", "count", "scale"}, key);
  if (!v.contains("min") || !v.contains("max") || !v.contains("count"))
    throw ConfigError(key + " range needs min, max and count");
  const std::string scale = v.contains("scale") ? get_as<std::string>(v["scale"], key) : "linear";
  if (scale != "linear" && scale != "log")
    throw ConfigError(key + ".scale must be linear or log");
  const auto vals = level_range(get_as<double>(v["min"], key), get_as<double>(v["max"], key),
                                get_as<int>(v["count"], key), scale == "log");
  std::vector<T> out;
  for (double x : vals) {
    if constexpr (std::is_integral_v<T>)
      out.push_back(static_cast<T>(std::lround(x)));
    else
      out.push_back(x);
  }
  return out;
}

}  // namespace

RunConfig parse_config(std::string_view json_text, RunConfig cfg) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(doc,
             {"data", "meta", "exclude", "max_id", "method", "metric", "regularization", "k",
              "bw_par", "m", "gamma_star", "doe", "screen", "out", "format", "workers",
              "weighted", "seed"},
             "config");
  if (doc.contains("data")) cfg.data_dir = get_as<std::string>(doc["data"], "data");
  if (doc.contains("meta")) cfg.meta = get_as<std::string>(doc["meta"], "meta");
  if (doc.contains("exclude")) {
    const auto ids = get_as<std::vector<int>>(doc["exclude"], "exclude");
    cfg.exclude = std::set<int>(ids.begin(), ids.end());
  }
  if (doc.contains("max_id")) {
    if (doc["max_id"].is_null())
      cfg.max_id.reset();
    else
      cfg.max_id = get_as<int>(doc["max_id"], "max_id");
  }
  if (doc.contains("method")) {
    const auto method = parse_method(get_as<std::string>(doc["method"], "method"));
    cfg.selector = method == Method::AAG ? MethodSelector::aag(MetricKind::PearsonDist)
                                         : MethodSelector::monotonicity(Regularization::Zone);
  }
  if (doc.contains("metric")) {
    if (cfg.selector.method != Method::AAG) throw ConfigError("metric only applies to method aag");
    cfg.selector.metric = parse_metric(get_as<std::string>(doc["metric"], "metric"));
  }
  if (doc.contains("regularization")) {
    if (cfg.selector.method != Method::Monotonicity)
      throw ConfigError("regularization only applies to method monot");
    cfg.selector.regularization =
        parse_regularization(get_as<std::string>(doc["regularization"], "regularization"));
  }
  if (doc.contains("k")) cfg.k = get_as<int>(doc["k"], "k");
  if (doc.contains("bw_par")) cfg.bw_par = get_as<double>(doc["bw_par"], "bw_par");
  if (doc.contains("m")) cfg.m = get_as<int>(doc["m"], "m");
  if (doc.contains("gamma_star")) cfg.gamma_star = get_as<double>(doc["gamma_star"], "gamma_star");

  if (doc.contains("doe")) {
    const auto& d = doc["doe"];
    check_keys(d, {"k", "bw_par", "m", "gamma_star", "methods"}, "doe");
    if (d.contains("k")) cfg.design.k_levels = levels<int>(d["k"], "doe.k");
    if (d.contains("bw_par")) cfg.design.bw_levels = levels<double>(d["bw_par"], "doe.bw_par");
    if (d.contains("m")) cfg.design.m_levels = levels<int>(d["m"], "doe.m");
    if (d.contains("gamma_star"))
      cfg.design.gamma_levels = levels<double>(d["gamma_star"], "doe.gamma_star");
    if (d.contains("methods")) {
      cfg.design.methods.clear();
      for (const auto& s : get_as<std::vector<std::string>>(d["methods"], "doe.methods"))
        cfg.design.methods.push_back(parse_selector(s));
    }
  }

  if (doc.contains("screen")) {
    const auto& s = doc["screen"];
    check_keys(s, {"enabled", "rules", "bins", "k", "bw_par", "m"}, "screen");
    if (s.contains("enabled")) cfg.screen = get_as<bool>(s["enabled"], "screen.enabled");
    if (s.contains("bins")) cfg.screening.bins = get_as<int>(s["bins"], "screen.bins");
    if (s.contains("k")) cfg.screening.k = get_as<int>(s["k"], "screen.k");
    if (s.contains("bw_par")) cfg.screening.bw_par = get_as<double>(s["bw_par"], "screen.bw_par");
    if (s.contains("m")) cfg.screening.m = get_as<int>(s["m"], "screen.m");
    if (s.contains("rules")) {
      if (!s["rules"].is_array()) throw ConfigError("screen.rules must be an array");
      cfg.rules.clear();
      for (const auto& r : s["rules"]) {
        check_keys(r, {"feature", "op", "threshold"}, "screen rule");
        if (!r.contains("feature") || !r.contains("op") || !r.contains("threshold"))
          throw ConfigError("screen rule needs feature, op and threshold");
        cfg.rules.push_back({get_as<std::string>(r["feature"], "feature"),
                             parse_comparator(get_as<std::string>(r["op"], "op")),
                             get_as<double>(r["threshold"], "threshold")});
      }
    }
  }

  if (doc.contains("out")) cfg.out_dir = get_as<std::string>(doc["out"], "out");
  if (doc.contains("format")) cfg.format = parse_format(get_as<std::string>(doc["format"], "format"));
  if (doc.contains("workers")) {
    const int w = get_as<int>(doc["workers"], "workers");
    if (w < 1) throw ConfigError("workers must be >= 1");
    cfg.workers = static_cast<unsigned>(w);
  }
  if (doc.contains("weighted")) cfg.weighted = get_as<bool>(doc["weighted"], "weighted");
  if (doc.contains("seed")) cfg.seed = get_as<std::uint64_t>(doc["seed"], "seed");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::string config_json(const RunConfig& cfg) {
  json j;
  j["data"] = cfg.data_dir.generic_string();
  j["meta"] = cfg.meta_path().generic_string();
  j["exclude"] = std::vector<int>(cfg.exclude.begin(), cfg.exclude.end());
  j["max_id"] = cfg.max_id ? json(*cfg.max_id) : json(nullptr);
  j["method"] = to_string(cfg.selector.method);
  if (cfg.selector.metric) j["metric"] = to_string(*cfg.selector.metric);
  if (cfg.selector.regularization) j["regularization"] = to_string(*cfg.selector.regularization);
  j["k"] = cfg.k;
  j["bw_par"] = cfg.bw_par;
  j["m"] = cfg.m;
  j["gamma_star"] = cfg.gamma_star;
  std::vector<std::string> methods;
  for (const auto& s : cfg.design.methods) methods.push_back(s.label());
  j["doe"] = {{"k", cfg.design.k_levels},
              {"bw_par", cfg.design.bw_levels},
              {"m", cfg.design.m_levels},
              {"gamma_star", cfg.design.gamma_levels},
              {"methods", methods}};
  json rules = json::array();
  for (const auto& r : cfg.rules)
    rules.push_back({{"feature", r.feature}, {"op", to_string(r.op)}, {"threshold", r.threshold}});
  j["screen"] = {{"enabled", cfg.screen},
                 {"rules", rules},
                 {"bins", cfg.screening.bins},
                 {"k", cfg.screening.k},
                 {"bw_par", cfg.screening.bw_par},
                 {"m", cfg.screening.m}};
  j["format"] = to_string(cfg.format);
  j["weighted"] = cfg.weighted;
  j["seed"] = cfg.seed;
  return j.dump();
}

}  // namespace causaldir
