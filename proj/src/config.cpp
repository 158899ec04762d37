#include "bo/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "bo/errors.hpp"

namespace bo {
namespace {

const std::vector<std::pair<ExperimentName, std::string>>& name_table() {
  static const std::vector<std::pair<ExperimentName, std::string>> t{
      {ExperimentName::simulate, "simulate"},
      {ExperimentName::conservation, "conservation"},
      {ExperimentName::gauge_residual, "gauge-residual"},
      {ExperimentName::strichartz_scan, "strichartz-scan"},
      {ExperimentName::flowmap, "flowmap"},
      {ExperimentName::scaling, "scaling"},
      {ExperimentName::convergence, "convergence"},
      {ExperimentName::estimate_monitor, "estimate-monitor"},
      {ExperimentName::bernstein, "bernstein"},
      {ExperimentName::gauge_lipschitz, "gauge-lipschitz"},
  };
  return t;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& want) {
  throw ConfigError("key '" + key + "': cannot parse '" + value + "' as " + want);
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, out);
  if (r.ec != std::errc() || r.ptr != end) bad_value(key, v, "a real number");
  return out;
}

template <class Int>
Int parse_int(const std::string& key, const std::string& v) {
  Int out = 0;
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, out);
  if (r.ec != std::errc() || r.ptr != end) bad_value(key, v, "an integer");
  return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
  if (out.empty()) bad_value(key, v, "a comma-separated list");
  return out;
}

std::string fmt(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, r.ptr};
}

std::string fmt_list(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + fmt(xs[i]);
  return s;
}

template <class E>
E parse_enum(const std::string& key, const std::string& v, const std::vector<std::pair<E, std::string>>& table) {
  for (const auto& [e, s] : table)
    if (s == v) return e;
  std::string options;
  for (const auto& [e, s] : table) options += (options.empty() ? "" : "|") + s;
  bad_value(key, v, "one of " + options);
}

template <class E>
std::string enum_name(E e, const std::vector<std::pair<E, std::string>>& table) {
  for (const auto& [x, s] : table)
    if (x == e) return s;
  return "?";
}

const std::vector<std::pair<Equation, std::string>> kEquations{
    {Equation::linear, "linear"},
    {Equation::gbo, "gbo"},
    {Equation::bo2, "bo2"},
    {Equation::renormalized_gbo, "renormalized-gbo"}};
const std::vector<std::pair<Scheme, std::string>> kSchemes{{Scheme::if_rk4, "ifrk4"}, {Scheme::etd_rk4, "etdrk4"}};
const std::vector<std::pair<Dealias, std::string>> kDealias{
    {Dealias::two_thirds, "two-thirds"}, {Dealias::pad4, "pad4"}, {Dealias::none, "none"}};
const std::vector<std::pair<GaugeVariant, std::string>> kVariants{{GaugeVariant::bo, "bo"},
                                                                   {GaugeVariant::gbo, "gbo"}};

struct KeyOps {
  std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <class T>
KeyOps real_key(T ExperimentConfig::*m) {
  return {[m](ExperimentConfig& c, const std::string& k, const std::string& v) { c.*m = parse_double(k, v); },
          [m](const ExperimentConfig& c) { return fmt(c.*m); }};
}

template <class T>
KeyOps int_key(T ExperimentConfig::*m) {
  return {[m](ExperimentConfig& c, const std::string& k, const std::string& v) { c.*m = parse_int<T>(k, v); },
          [m](const ExperimentConfig& c) { return std::to_string(c.*m); }};
}

KeyOps list_key(std::vector<double> ExperimentConfig::*m) {
  return {[m](ExperimentConfig& c, const std::string& k, const std::string& v) { c.*m = parse_list(k, v); },
          [m](const ExperimentConfig& c) { return fmt_list(c.*m); }};
}

template <class E>
KeyOps enum_key(E ExperimentConfig::*m, const std::vector<std::pair<E, std::string>>& table) {
  return {[m, &table](ExperimentConfig& c, const std::string& k, const std::string& v) {
            c.*m = parse_enum(k, v, table);
          },
          [m, &table](const ExperimentConfig& c) { return enum_name(c.*m, table); }};
}

using KeyTable = std::vector<std::pair<std::string, KeyOps>>;

const KeyTable& key_table() {
  using C = ExperimentConfig;
  static const KeyTable t{
      {"lambda", real_key(&C::lambda)},
      {"n_points", int_key(&C::n_points)},
      {"points_per_unit", int_key(&C::points_per_unit)},
      {"equation", enum_key(&C::equation, kEquations)},
      {"k", int_key(&C::k)},
      {"dt", real_key(&C::dt)},
      {"t_final", real_key(&C::t_final)},
      {"scheme", enum_key(&C::scheme, kSchemes)},
      {"dealias", enum_key(&C::dealias, kDealias)},
      {"sample_stride", int_key(&C::sample_stride)},
      {"seed", int_key(&C::seed)},
      {"n_samples", int_key(&C::n_samples)},
      {"amplitude", real_key(&C::amplitude)},
      {"n_modes", int_key(&C::n_modes)},
      {"decay", real_key(&C::decay)},
      {"mean", real_key(&C::mean)},
      {"gammas", list_key(&C::gammas)},
      {"lambdas", list_key(&C::lambdas)},
      {"variant", enum_key(&C::variant, kVariants)},
      {"shrink_amplitude", real_key(&C::shrink_amplitude)},
      {"perturbation", real_key(&C::perturbation)},
      {"shrink", real_key(&C::shrink)},
      {"dilation", real_key(&C::dilation)},
      {"n_levels", int_key(&C::n_levels)},
      {"rel_tol", real_key(&C::rel_tol)},
      {"max_residual", real_key(&C::max_residual)},
      {"min_shrink", real_key(&C::min_shrink)},
      {"drift_tol", real_key(&C::drift_tol)},
      {"invariant_tol", real_key(&C::invariant_tol)},
      {"min_separation", real_key(&C::min_separation)},
      {"max_spread", real_key(&C::max_spread)},
      {"max_slope", real_key(&C::max_slope)},
      {"max_ratio", real_key(&C::max_ratio)},
      {"max_ratio_change", real_key(&C::max_ratio_change)},
      {"h1_radius", real_key(&C::h1_radius)},
      {"mean_tol", real_key(&C::mean_tol)},
      {"order_min", real_key(&C::order_min)},
      {"order_max", real_key(&C::order_max)},
      {"bo_tol", real_key(&C::bo_tol)},
      {"gbo_tol", real_key(&C::gbo_tol)},
      {"identity_tol", real_key(&C::identity_tol)},
  };
  return t;
}

const KeyOps& lookup(const std::string& key) {
  for (const auto& [name, ops] : key_table())
    if (name == key) return ops;
  throw ConfigError("unknown configuration key '" + key + "'");
}

}  // namespace

std::string to_string(ExperimentName name) { return enum_name(name, name_table()); }

ExperimentName parse_experiment_name(const std::string& s) {
  for (const auto& [e, n] : name_table())
    if (n == s) return e;
  throw ConfigError("unknown experiment '" + s + "'");
}

const std::vector<ExperimentName>& all_experiments() {
  static const std::vector<ExperimentName> v = [] {
    std::vector<ExperimentName> out;
    for (const auto& [e, n] : name_table()) out.push_back(e);
    return out;
  }();
  return v;
}

SolverConfig ExperimentConfig::solver() const {
  SolverConfig s;
  s.equation = equation;
  s.k = k;
  s.dt = dt;
  s.t_final = t_final;
  s.scheme = scheme;
  s.dealias = dealias;
  s.sample_stride = sample_stride;
  return s;
}

ExperimentConfig default_config(ExperimentName name) {
  ExperimentConfig c;
  c.name = name;
  switch (name) {
    case ExperimentName::simulate:
      c.amplitude = 0.2;
      break;
    case ExperimentName::conservation:
      c.n_points = 256;
      c.dt = 1e-4;
      c.sample_stride = 100;
      c.amplitude = 0.2;
      break;
    case ExperimentName::gauge_residual:
      c.n_points = 256;
      c.k = 2;
      c.n_samples = 20;
      c.n_modes = 63;
      c.decay = 0.85;
      c.amplitude = 0.1;
      break;
    case ExperimentName::strichartz_scan:
      c.n_samples = 50;
      c.max_spread = 2.0;
      break;
    case ExperimentName::flowmap:
      c.t_final = 0.5;
      c.n_samples = 25;
      c.amplitude = 0.25;
      break;
    case ExperimentName::scaling:
      c.t_final = 0.25;
      c.k = 2;
      break;
    case ExperimentName::convergence:
      c.t_final = 0.5;
      c.dt = 0.05;
      break;
    case ExperimentName::estimate_monitor:
      c.equation = Equation::renormalized_gbo;
      c.k = 2;
      c.t_final = 0.5;
      c.n_samples = 20;
      break;
    case ExperimentName::bernstein:
      c.lambdas = {1.0, 4.0, 16.0};
      c.n_samples = 50;
      c.n_modes = 12;  // physical frequency, below the points_per_unit / 2 cutoff
      c.max_spread = 3.0;
      break;
    case ExperimentName::gauge_lipschitz:
      c.lambdas = {1.0, 4.0, 16.0};
      c.n_samples = 100;
      c.variant = GaugeVariant::bo;
      c.max_spread = 3.0;
      break;
  }
  return c;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [name, ops] : key_table()) out.push_back(name);
    return out;
  }();
  return keys;
}

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  lookup(key).set(cfg, key, trim(value));
}

std::string get_config_value(const ExperimentConfig& cfg, const std::string& key) { return lookup(key).get(cfg); }

void apply_config_text(ExperimentConfig& cfg, const std::string& text) {
  std::vector<std::pair<std::string, std::string>> global, mine;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw.substr(0, raw.find_first_of("#;")));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "malformed section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      try {
        parse_experiment_name(section);
      } catch (const ConfigError&) {
        throw ConfigError(where + "unknown section '" + section + "'");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      // Validate every entry, including those for other experiments.
      ExperimentConfig scratch = cfg;
      set_config_value(scratch, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
    if (section.empty())
      global.emplace_back(key, value);
    else if (section == to_string(cfg.name))
      mine.emplace_back(key, value);
  }
  for (const auto& [k, v] : global) set_config_value(cfg, k, v);
  for (const auto& [k, v] : mine) set_config_value(cfg, k, v);
}

void apply_config_file(ExperimentConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  apply_config_text(cfg, ss.str());
}

void validate(const ExperimentConfig& c) {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  need(c.lambda > 0 && std::isfinite(c.lambda), "lambda must be positive");
  need(c.n_points >= 8 && c.n_points % 2 == 0, "n_points must be even and >= 8");
  need(c.points_per_unit >= 4 && c.points_per_unit % 2 == 0, "points_per_unit must be even and >= 4");
  need(c.k >= 1, "k must be >= 1");
  need(c.dt > 0 && c.t_final > 0 && c.dt <= c.t_final, "need 0 < dt <= t_final");
  need(c.sample_stride >= 1, "sample_stride must be >= 1");
  need(c.n_samples >= 1, "n_samples must be >= 1");
  need(c.amplitude >= 0, "amplitude must be nonnegative");
  need(c.n_modes >= 1 && 2 * c.n_modes < c.n_points, "n_modes must lie in [1, n_points/2)");
  need(c.decay > 0 && c.decay <= 1, "decay must lie in (0, 1]");
  need(!c.gammas.empty(), "gammas must be nonempty");
  need(!c.lambdas.empty() && std::all_of(c.lambdas.begin(), c.lambdas.end(), [](double l) { return l >= 1; }),
       "lambdas must be nonempty and >= 1");
  need(c.shrink_amplitude > 0, "shrink_amplitude must be positive");
  need(c.perturbation >= 0, "perturbation must be nonnegative");
  need(c.shrink > 1, "shrink must exceed 1");
  need(c.dilation >= 1, "dilation must be >= 1");
  need(c.n_levels >= 3, "n_levels must be >= 3");
  need(c.rel_tol > 0, "rel_tol must be positive");
  if (c.name == ExperimentName::gauge_residual) need(c.amplitude > 0, "gauge-residual needs a positive amplitude");
  if (c.name == ExperimentName::gauge_residual)
    need(4 * c.n_modes < c.n_points, "gauge-residual needs n_modes < n_points/4 (fields are also resolved at n_points/2)");
}

}  // namespace bo
