#include "causaldir/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

namespace causaldir {

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::XtoY: return "X->Y";
    case Direction::YtoX: return "Y->X";
    case Direction::Undecided: return "undecided";
  }
  return "undecided";
}

Direction parse_direction(std::string_view s) {
  if (s == "X->Y" || s == "x->y" || s == "xy") return Direction::XtoY;
  if (s == "Y->X" || s == "y->x" || s == "yx") return Direction::YtoX;
  if (s == "undecided") return Direction::Undecided;
  throw ParseError("unknown direction '" + std::string(s) + "'");
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_double(std::string_view tok, double& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size() && std::isfinite(out);
}

bool parse_int(std::string_view tok, int& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t lineno = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    ++lineno;
    fn(line, lineno);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
}

}  // namespace

Direction PairMeta::truth() const {
  return cause.first < effect.first ? Direction::XtoY : Direction::YtoX;
}

PairSample load_pair(const std::filesystem::path& path, int x_col, int y_col) {
  if (x_col < 1 || y_col < 1) throw DimensionError("column indices are 1-based");
  const std::string text = read_file(path);
  std::vector<double> xs, ys;
  for_each_line(text, [&](std::string_view line, std::size_t lineno) {
    auto toks = split_ws(line);
    if (toks.empty()) return;
    std::vector<double> row(toks.size());
    for (std::size_t c = 0; c < toks.size(); ++c) {
      if (!parse_double(toks[c], row[c]))
        throw ParseError("non-numeric field '" + std::string(toks[c]) + "' in " + path.string(),
                         lineno);
    }
    if (row.size() < 2)
      throw ParseError("expected at least 2 columns in " + path.string(), lineno);
    const auto need = static_cast<std::size_t>(std::max(x_col, y_col));
    if (row.size() < need)
      throw DimensionError("column " + std::to_string(need) + " out of range in " + path.string() +
                           " (line " + std::to_string(lineno) + ")");
    xs.push_back(row[x_col - 1]);
    ys.push_back(row[y_col - 1]);
  });
  if (xs.size() < 2) throw ParseError("fewer than 2 rows in " + path.string());

  PairSample p;
  p.x = Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
  p.y = Eigen::Map<const Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size()));
  return p;
}

std::vector<PairMeta> parse_meta(std::string_view text) {
  std::vector<PairMeta> out;
  for_each_line(text, [&](std::string_view line, std::size_t lineno) {
    auto toks = split_ws(line);
    if (toks.empty()) return;
    if (toks.size() != 6)
      throw ParseError("expected 6 fields, got " + std::to_string(toks.size()), lineno);
    PairMeta m;
    int f[5];
    for (int i = 0; i < 5; ++i) {
      if (!parse_int(toks[i], f[i]))
        throw ParseError("non-integer field '" + std::string(toks[i]) + "'", lineno);
    }
    if (!parse_double(toks[5], m.weight) || m.weight < 0)
      throw ParseError("bad weight '" + std::string(toks[5]) + "'", lineno);
    m.id = f[0];
    m.cause = {f[1], f[2]};
    m.effect = {f[3], f[4]};
    if (m.id < 1 || m.cause.first < 1 || m.effect.first < 1 || m.cause.first > m.cause.last ||
        m.effect.first > m.effect.last)
      throw ParseError("malformed column range", lineno);
    out.push_back(m);
  });
  return out;
}

std::vector<PairMeta> load_meta(const std::filesystem::path& path) {
  return parse_meta(read_file(path));
}

std::string format_meta(const std::vector<PairMeta>& metas) {
  std::string out;
  char buf[64];
  for (const auto& m : metas) {
    char id[16];
    std::snprintf(id, sizeof id, "%04d", m.id);
    out += id;
    for (int v : {m.cause.first, m.cause.last, m.effect.first, m.effect.last}) {
      out += ' ';
      out += std::to_string(v);
    }
    auto res = std::to_chars(buf, buf + sizeof buf, m.weight);
    out += ' ';
    out.append(buf, res.ptr);
    out += '\n';
  }
  return out;
}

const std::set<int>& default_exclusions() {
  static const std::set<int> ids{52, 53, 54, 55, 71};
  return ids;
}

std::vector<PairMeta> select_pairs(const std::vector<PairMeta>& metas,
                                   const std::set<int>& exclude_ids, std::optional<int> max_id) {
  std::vector<PairMeta> out;
  for (const auto& m : metas) {
    if (!m.scalar() || exclude_ids.contains(m.id)) continue;
    if (max_id && m.id > *max_id) continue;
    out.push_back(m);
  }
  return out;
}

PairSample normalize(const PairSample& pair) {
  auto rescale = [&](const Eigen::VectorXd& v, const char* name) {
    const double lo = v.minCoeff();
    const double hi = v.maxCoeff();
    if (!(hi > lo))
      throw DegeneratePairError("pair " + std::to_string(pair.id) + ": " + name +
                                " has zero range");
    return Eigen::VectorXd((v.array() - lo) / (hi - lo));
  };
  PairSample out = pair;
  out.x = rescale(pair.x, "x");
  out.y = rescale(pair.y, "y");
  return out;
}

std::filesystem::path pair_file(const std::filesystem::path& dir, int id) {
  char name[32];
  std::snprintf(name, sizeof name, "pair%04d.txt", id);
  return dir / name;
}

PairSample load_benchmark_pair(const std::filesystem::path& dir, const PairMeta& meta) {
  if (!meta.scalar())
    throw DimensionError("pair " + std::to_string(meta.id) + " is not a scalar pair");
  const int x_col = std::min(meta.cause.first, meta.effect.first);
  const int y_col = std::max(meta.cause.first, meta.effect.first);
  PairSample p = load_pair(pair_file(dir, meta.id), x_col, y_col);
  p.id = meta.id;
  p.truth = meta.truth();
  p.weight = meta.weight;
  return p;
}

std::string_view to_string(Mechanism m) {
  switch (m) {
    case Mechanism::Quadratic: return "quadratic";
    case Mechanism::Sine: return "sine";
    case Mechanism::Sigmoid: return "sigmoid";
  }
  return "quadratic";
}

Mechanism parse_mechanism(std::string_view s) {
  if (s == "quadratic") return Mechanism::Quadratic;
  if (s == "sine") return Mechanism::Sine;
  if (s == "sigmoid") return Mechanism::Sigmoid;
  throw ParameterError("unknown mechanism '" + std::string(s) + "'");
}

double apply_mechanism(Mechanism m, double x) {
  switch (m) {
    case Mechanism::Quadratic: return x * x;
    case Mechanism::Sine: return std::sin(2.0 * std::numbers::pi * x);
    case Mechanism::Sigmoid: return 1.0 / (1.0 + std::exp(-10.0 * (x - 0.5)));
  }
  return x;
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double SplitMix64::normal() {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

PairSample generate_synthetic(std::uint64_t seed, int n, Mechanism mechanism, double noise_sd) {
  if (n < 50) throw ParameterError("synthetic pairs need n >= 50");
  if (!(noise_sd > 0)) throw ParameterError("noise_sd must be positive");
  SplitMix64 rng(seed);
  PairSample p;
  p.id = static_cast<int>(seed % 1000000);
  p.x.resize(n);
  p.y.resize(n);
  for (int i = 0; i < n; ++i) p.x[i] = rng.uniform();
  for (int i = 0; i < n; ++i) p.y[i] = apply_mechanism(mechanism, p.x[i]) + noise_sd * rng.normal();
  p.truth = Direction::XtoY;
  return p;
}

}  // namespace causaldir
