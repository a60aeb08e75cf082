#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "harness_internal.hpp"
#include "hetcache/errors.hpp"

namespace hetcache {

namespace detail {

namespace {

using Setter = void (*)(Scenario&, double);

std::size_t to_count(double v, const char* what) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e9)
    throw ConfigError(std::string(what) + " must be a positive integer, got " + format_number(v));
  return static_cast<std::size_t>(v);
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"rate_target", [](Scenario& s, double v) { s.cfg.rate_target = v; }},
      {"alpha", [](Scenario& s, double v) { s.cfg.alpha = v; }},
      {"bandwidth", [](Scenario& s, double v) { s.cfg.bandwidth = v; }},
      {"bias_macro", [](Scenario& s, double v) { s.cfg.bias_macro = v; }},
      {"bias_helper", [](Scenario& s, double v) { s.cfg.bias_helper = v; }},
      {"antennas_macro",
       [](Scenario& s, double v) { s.cfg.antennas_macro = static_cast<int>(to_count(v, "antennas_macro")); }},
      {"lambda_macro", [](Scenario& s, double v) { s.cfg.lambda_macro = v; }},
      {"lambda_helper", [](Scenario& s, double v) { s.cfg.lambda_helper = v; }},
      {"lambda_user", [](Scenario& s, double v) { s.cfg.lambda_user = v; }},
      {"helper_density_ratio", [](Scenario& s, double v) { s.cfg.lambda_helper = v * s.cfg.lambda_macro; }},
      {"user_density_ratio", [](Scenario& s, double v) { s.cfg.lambda_user = v * s.cfg.lambda_helper; }},
      {"power_macro_dbm", [](Scenario& s, double v) { s.cfg.power_macro = dbm_to_watt(v); }},
      {"power_helper_dbm", [](Scenario& s, double v) { s.cfg.power_helper = dbm_to_watt(v); }},
      {"power_ratio_db", [](Scenario& s, double v) { s.cfg.power_macro = s.cfg.power_helper * std::pow(10.0, v / 10.0); }},
      {"noise_dbm", [](Scenario& s, double v) { s.cfg.noise_power = dbm_to_watt(v); }},
      {"zipf_skew", [](Scenario& s, double v) { s.zipf_skew = v; }},
      {"cache_size", [](Scenario& s, double v) { s.cache_size = to_count(v, "cache_size"); }},
      {"normalized_cache",
       [](Scenario& s, double v) {
         if (!(v > 0.0 && v <= 1.0)) throw ConfigError("normalized_cache must lie in (0, 1]");
         s.cache_size = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(v * s.n_files)));
       }},
      {"n_files", [](Scenario& s, double v) { s.n_files = to_count(v, "n_files"); }},
  };
  return table;
}

}  // namespace

bool is_sweep_variable(const std::string& name) { return setters().count(name) != 0; }

void apply_variable(Scenario& s, const std::string& name, double value) {
  auto it = setters().find(name);
  if (it == setters().end()) throw ConfigError("unknown sweep variable '" + name + "'");
  if (!std::isfinite(value)) throw ConfigError("non-finite value for " + name);
  it->second(s, value);
}

bool defined(PolicyKind policy, Metric metric, Method method) {
  const bool sim = method == Method::Simulation;
  if (policy == PolicyKind::Traditional) {
    switch (metric) {
      case Metric::Ase: return method != Method::LowerBound;
      case Metric::HelperAssociation:
      case Metric::HelperActive: return method == Method::Analytic || sim;
      default: return false;
    }
  }
  switch (metric) {
    case Metric::Success:
    case Metric::SuccessHelper: return method != Method::ClosedForm;
    case Metric::SuccessMacro:
    case Metric::HelperAssociation:
    case Metric::HelperActive: return method == Method::Analytic || sim;
    case Metric::Ase: return method != Method::LowerBound;
    case Metric::CacheProbability: return method == Method::Analytic;
    case Metric::HelperDensity: return policy == PolicyKind::Popular && method == Method::ClosedForm;
  }
  return false;
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace detail

std::string to_string(Metric m) {
  switch (m) {
    case Metric::Success: return "success";
    case Metric::SuccessMacro: return "success_macro";
    case Metric::SuccessHelper: return "success_helper";
    case Metric::Ase: return "ase";
    case Metric::HelperAssociation: return "helper_association";
    case Metric::HelperActive: return "helper_active";
    case Metric::CacheProbability: return "cache_prob";
    case Metric::HelperDensity: return "helper_density";
  }
  return "unknown";
}

namespace {

const std::map<std::string, PolicyKind>& policy_names() {
  static const std::map<std::string, PolicyKind> names = {
      {"popular", PolicyKind::Popular},
      {"uniform", PolicyKind::Uniform},
      {"lower_bound", PolicyKind::LowerBound},
      {"max_success", PolicyKind::MaxSuccess},
      {"max_ase", PolicyKind::MaxAse},
      {"tier2_association", PolicyKind::Tier2Association},
      {"high_density", PolicyKind::HighDensity},
      {"low_density", PolicyKind::LowDensity},
  };
  return names;
}

Metric parse_metric(const std::string& s) {
  for (Metric m : {Metric::Success, Metric::SuccessMacro, Metric::SuccessHelper, Metric::Ase,
                   Metric::HelperAssociation, Metric::HelperActive, Metric::CacheProbability,
                   Metric::HelperDensity})
    if (to_string(m) == s) return m;
  throw ConfigError("unknown metric '" + s + "'");
}

Method parse_method(const std::string& s) {
  for (Method m : {Method::Analytic, Method::LowerBound, Method::ClosedForm, Method::Simulation})
    if (to_string(m) == s) return m;
  throw ConfigError("unknown method '" + s + "'");
}

std::vector<double> log_grid(double from, double to, std::size_t points) {
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
    g[i] = from * std::pow(to / from, t);
  }
  g.front() = from;
  g.back() = to;
  return g;
}

void check_axis(const SweepAxis& axis, const std::string& key) {
  if (axis.variable.empty()) throw ConfigError(key + "/variable: missing");
  if (!detail::is_sweep_variable(axis.variable))
    throw ConfigError(key + "/variable: unknown sweep variable '" + axis.variable + "'");
  if (axis.values.empty()) throw ConfigError(key + "/values: grid is empty");
  for (double v : axis.values)
    if (!std::isfinite(v)) throw ConfigError(key + "/values: non-finite entry");
  const bool up = axis.values.size() < 2 || axis.values[1] > axis.values[0];
  for (std::size_t i = 1; i < axis.values.size(); ++i) {
    const bool ok = up ? axis.values[i] > axis.values[i - 1] : axis.values[i] < axis.values[i - 1];
    if (!ok) throw ConfigError(key + "/values: grid is not strictly monotone at index " + std::to_string(i));
  }
}

}  // namespace

PolicySpec PolicySpec::parse(std::string_view label) {
  const std::string s(label);
  if (auto it = policy_names().find(s); it != policy_names().end()) return {it->second, 0.0};
  constexpr std::string_view prefix = "traditional:";
  if (s.rfind(prefix, 0) == 0) {
    const std::string num = s.substr(prefix.size());
    double cap = 0.0;
    auto res = std::from_chars(num.data(), num.data() + num.size(), cap);
    if (res.ec != std::errc() || res.ptr != num.data() + num.size() || !(cap > 0.0) || !std::isfinite(cap))
      throw ConfigError("policy '" + s + "': backhaul capacity must be a positive number of bit/s");
    return {PolicyKind::Traditional, cap};
  }
  throw ConfigError("unknown policy '" + s + "'");
}

std::string PolicySpec::label() const {
  if (kind == PolicyKind::Traditional) return "traditional:" + detail::format_number(backhaul_capacity);
  for (const auto& [name, k] : policy_names())
    if (k == kind) return name;
  return "unknown";
}

const std::vector<std::string>& sweep_variables() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, setter] : detail::setters()) out.push_back(name);
    return out;
  }();
  return names;
}

void ExperimentSpec::validate() const {
  const auto need = [](bool ok, const char* key, const char* what) {
    if (!ok) throw ConfigError(std::string("/network/") + key + ": " + what);
  };
  const NetworkConfig& c = network;
  need(std::isfinite(c.lambda_macro) && c.lambda_macro > 0.0, "lambda_macro", "must be positive");
  need(std::isfinite(c.lambda_helper) && c.lambda_helper >= 0.0, "lambda_helper", "must be non-negative");
  need(std::isfinite(c.lambda_user) && c.lambda_user >= 0.0, "lambda_user", "must be non-negative");
  need(std::isfinite(c.power_macro) && c.power_macro > 0.0, "power_macro_dbm", "must be finite");
  need(std::isfinite(c.power_helper) && c.power_helper > 0.0, "power_helper_dbm", "must be finite");
  need(std::isfinite(c.bias_macro) && c.bias_macro > 0.0, "bias_macro", "must be positive");
  need(std::isfinite(c.bias_helper) && c.bias_helper >= 0.0, "bias_helper", "must be non-negative");
  need(std::isfinite(c.alpha) && c.alpha > 2.0, "alpha", "must exceed 2");
  need(std::isfinite(c.bandwidth) && c.bandwidth > 0.0, "bandwidth_hz", "must be positive");
  need(std::isfinite(c.rate_target) && c.rate_target > 0.0, "rate_target_bps", "must be positive");
  try {
    network.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("/network: ") + e.what());
  }
  if (n_files == 0) throw ConfigError("/catalog/n_files: must be positive");
  if (cache_size == 0 || cache_size > n_files) throw ConfigError("/catalog/cache_size: must lie in [1, n_files]");
  if (!(zipf_skew >= 0.0)) throw ConfigError("/catalog/zipf_skew: must be non-negative");
  check_axis(sweep, "/sweep");
  if (series) {
    check_axis(*series, "/series");
    if (series->variable == sweep.variable) throw ConfigError("/series/variable: same as the sweep variable");
  }
  if (area_cache && !(*area_cache > 0.0)) throw ConfigError("/area_cache: must be positive");
  if (policies.empty()) throw ConfigError("/policies: empty policy list");
  if (metrics.empty()) throw ConfigError("/metrics: empty metric list");
  if (methods.empty()) throw ConfigError("/methods: empty method list");
  if (restarts < 1) throw ConfigError("/local_search/restarts: must be at least 1");
  for (Metric m : metrics) {
    bool any = false;
    for (const PolicySpec& p : policies)
      for (Method me : methods) any = any || detail::defined(p.kind, m, me);
    if (!any) throw ConfigError("/metrics: '" + to_string(m) + "' is not defined for any listed policy and method");
  }
  for (const PolicySpec& p : policies) {
    bool any = false;
    for (Metric m : metrics)
      for (Method me : methods) any = any || detail::defined(p.kind, m, me);
    if (!any) throw ConfigError("/policies: '" + p.label() + "' has no defined metric/method pair");
  }
  if (std::find(metrics.begin(), metrics.end(), Metric::HelperDensity) != metrics.end()) {
    if (targets.empty()) throw ConfigError("/targets: helper_density needs at least one target ASE");
    for (double t : targets)
      if (!(t > 0.0)) throw ConfigError("/targets: entries must be positive");
  }
  if (std::find(methods.begin(), methods.end(), Method::Simulation) != methods.end()) {
    if (simulation.snapshots < 2) throw ConfigError("/simulation/snapshots: need at least 2 for an interval");
    if (!(simulation.region_side > 0.0)) throw ConfigError("/simulation/region_side_m: must be positive");
    if (!(simulation.time_budget >= 0.0)) throw ConfigError("/simulation/time_budget_s: must be non-negative");
  }
  if (cache_prob_files == 0) throw ConfigError("/cache_prob_files: must be positive");
}

std::vector<std::string> named_experiment_ids() {
  return {"fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "custom"};
}

ExperimentSpec named_experiment(std::string_view id) {
  ExperimentSpec s;
  s.id = std::string(id);
  const double lambda1 = s.network.lambda_macro;
  const auto parse_all = [](std::initializer_list<const char*> labels) {
    std::vector<PolicySpec> out;
    for (const char* l : labels) out.push_back(PolicySpec::parse(l));
    return out;
  };
  if (id == "custom") return s;
  if (id == "fig3") {
    s.sweep = {"rate_target", {1e6, 2e6, 3e6, 4e6, 5e6, 6e6}};
    s.series = SweepAxis{"zipf_skew", {0.5, 1.0}};
    s.policies = parse_all({"max_success", "lower_bound", "popular", "uniform"});
    s.metrics = {Metric::Success, Metric::SuccessMacro};
    s.methods = {Method::Analytic, Method::Simulation};
    s.simulation.snapshots = 1000;
    s.simulation.time_budget = 600.0;
  } else if (id == "fig4") {
    s.sweep = {"power_ratio_db", {15.0, 20.0, 25.0, 30.0, 35.0}};
    s.policies = parse_all({"max_success", "lower_bound"});
    s.metrics = {Metric::CacheProbability, Metric::Success};
    s.methods = {Method::Analytic};
  } else if (id == "fig5") {
    s.sweep = {"helper_density_ratio", log_grid(5.0, 200.0, 8)};
    s.policies = parse_all({"max_success", "lower_bound", "popular", "uniform"});
    s.metrics = {Metric::Success};
    s.methods = {Method::Analytic, Method::LowerBound};
  } else if (id == "fig6") {
    s.sweep = {"bias_helper", {1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0}};
    s.policies = parse_all({"max_success", "lower_bound", "popular", "uniform"});
    s.metrics = {Metric::Success};
    s.methods = {Method::Analytic};
  } else if (id == "fig7") {
    s.network.bias_helper = s.network.bias_macro;
    s.sweep = {"helper_density_ratio", {5.0, 10.0, 20.0, 50.0, 100.0, 200.0}};
    s.policies = parse_all({"popular", "max_ase", "traditional:10000000", "traditional:20000000"});
    s.metrics = {Metric::Ase};
    s.methods = {Method::Analytic, Method::ClosedForm, Method::Simulation};
    s.simulation.snapshots = 500;
    s.simulation.time_budget = 600.0;
  } else if (id == "fig8") {
    s.network.bias_helper = s.network.bias_macro;
    s.sweep = {"normalized_cache", {0.01, 0.02, 0.05, 0.1, 0.2, 0.5}};
    s.targets = {10.0 * lambda1, 20.0 * lambda1, 30.0 * lambda1};
    s.policies = parse_all({"popular"});
    s.metrics = {Metric::HelperDensity};
    s.methods = {Method::ClosedForm};
  } else if (id == "fig9") {
    s.network.bias_helper = s.network.bias_macro;
    s.area_cache = 1000.0 * lambda1;
    s.sweep = {"helper_density_ratio", {1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0}};
    s.series = SweepAxis{"zipf_skew", {0.5, 1.0}};
    s.policies = parse_all({"popular"});
    s.metrics = {Metric::Ase};
    s.methods = {Method::Analytic, Method::ClosedForm};
  } else {
    throw ConfigError("unknown experiment id '" + std::string(id) + "'");
  }
  return s;
}

namespace {

using nlohmann::json;

/// Walks a JSON object, remembering the key path for error messages and
/// rejecting keys that nothing consumed.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + ": expected an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  const json& raw(const char* key) {
    seen_.insert(key);
    if (!j_.contains(key)) throw ConfigError(child_path(key) + ": missing");
    return j_.at(key);
  }

  std::string child_path(const char* key) const { return path_ + "/" + key; }

  double number(const char* key) {
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError(child_path(key) + ": expected a number");
    return v.get<double>();
  }

  std::string string(const char* key) {
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError(child_path(key) + ": expected a string");
    return v.get<std::string>();
  }

  std::vector<std::string> strings(const char* key) {
    const json& v = raw(key);
    if (!v.is_array()) throw ConfigError(child_path(key) + ": expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_string()) throw ConfigError(child_path(key) + "/" + std::to_string(i) + ": expected a string");
      out.push_back(v[i].get<std::string>());
    }
    return out;
  }

  std::vector<double> numbers(const char* key) {
    const json& v = raw(key);
    if (!v.is_array()) throw ConfigError(child_path(key) + ": expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw ConfigError(child_path(key) + "/" + std::to_string(i) + ": expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(child_path(it.key().c_str()) + ": unknown key");
  }

  std::string where() const { return path_.empty() ? "/" : path_; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class F>
auto rethrow_at(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    if (msg.rfind("/", 0) == 0) throw;
    throw ConfigError(path + ": " + msg);
  }
}

double density_scale(const std::string& unit, const std::string& path) {
  if (unit == "m^-2") return 1.0;
  if (unit == "per_disk_250m") return per_disk(1.0, 250.0);
  throw ConfigError(path + ": unknown density unit '" + unit + "' (use m^-2 or per_disk_250m)");
}

bool is_density_variable(const std::string& v) {
  return v == "lambda_macro" || v == "lambda_helper" || v == "lambda_user";
}

SweepAxis parse_axis(Node& parent, const char* key, double dens) {
  Node n(parent.raw(key), parent.child_path(key));
  SweepAxis axis;
  axis.variable = n.string("variable");
  if (n.has("values") == n.has("log_grid"))
    throw ConfigError(n.where() + ": give exactly one of 'values' or 'log_grid'");
  if (n.has("values")) {
    axis.values = n.numbers("values");
  } else {
    Node g(n.raw("log_grid"), n.child_path("log_grid"));
    const double from = g.number("from"), to = g.number("to"), pts = g.number("points");
    g.finish();
    if (!(from > 0.0 && to > 0.0) || pts < 1 || pts != std::floor(pts))
      throw ConfigError(g.where() + ": need positive from/to and an integer point count");
    axis.values = log_grid(from, to, static_cast<std::size_t>(pts));
  }
  n.finish();
  if (is_density_variable(axis.variable))
    for (double& v : axis.values) v *= dens;
  return axis;
}

}  // namespace

ExperimentSpec parse_experiment(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("/: malformed JSON: ") + e.what());
  }
  Node root(doc, "");
  if (!root.has("schema_version")) throw ConfigError("/schema_version: missing");
  if (root.number("schema_version") != 1.0) throw ConfigError("/schema_version: only version 1 is supported");

  ExperimentSpec s = rethrow_at("/experiment", [&] {
    return named_experiment(root.has("experiment") ? root.string("experiment") : "custom");
  });
  const double dens = root.has("density_unit") ? density_scale(root.string("density_unit"), "/density_unit") : 1.0;

  if (root.has("network")) {
    Node n(root.raw("network"), "/network");
    NetworkConfig& c = s.network;
    if (n.has("lambda_macro")) c.lambda_macro = n.number("lambda_macro") * dens;
    if (n.has("lambda_helper")) c.lambda_helper = n.number("lambda_helper") * dens;
    if (n.has("lambda_user")) c.lambda_user = n.number("lambda_user") * dens;
    if (n.has("power_macro_dbm")) c.power_macro = dbm_to_watt(n.number("power_macro_dbm"));
    if (n.has("power_helper_dbm")) c.power_helper = dbm_to_watt(n.number("power_helper_dbm"));
    if (n.has("antennas_macro")) {
      const double a = n.number("antennas_macro");
      if (a < 1 || a != std::floor(a)) throw ConfigError("/network/antennas_macro: expected a positive integer");
      c.antennas_macro = static_cast<int>(a);
    }
    if (n.has("bias_macro")) c.bias_macro = n.number("bias_macro");
    if (n.has("bias_helper")) c.bias_helper = n.number("bias_helper");
    if (n.has("alpha")) c.alpha = n.number("alpha");
    if (n.has("bandwidth_hz")) c.bandwidth = n.number("bandwidth_hz");
    if (n.has("rate_target_bps")) c.rate_target = n.number("rate_target_bps");
    if (n.has("noise_dbm")) c.noise_power = dbm_to_watt(n.number("noise_dbm"));
    n.finish();
  }
  if (root.has("catalog")) {
    Node n(root.raw("catalog"), "/catalog");
    const auto count = [&](const char* key) {
      const double v = n.number(key);
      if (v < 1 || v != std::floor(v)) throw ConfigError(n.child_path(key) + ": expected a positive integer");
      return static_cast<std::size_t>(v);
    };
    if (n.has("n_files")) s.n_files = count("n_files");
    if (n.has("cache_size")) s.cache_size = count("cache_size");
    if (n.has("zipf_skew")) s.zipf_skew = n.number("zipf_skew");
    n.finish();
  }
  if (root.has("sweep")) s.sweep = parse_axis(root, "sweep", dens);
  if (root.has("series")) {
    if (root.raw("series").is_null()) s.series.reset();
    else s.series = parse_axis(root, "series", dens);
  }
  if (root.has("area_cache")) s.area_cache = root.number("area_cache") * dens;
  if (root.has("targets")) {
    s.targets = root.numbers("targets");
    for (double& t : s.targets) t *= dens;
  }
  if (root.has("policies")) {
    s.policies.clear();
    const auto labels = root.strings("policies");
    for (std::size_t i = 0; i < labels.size(); ++i)
      s.policies.push_back(rethrow_at("/policies/" + std::to_string(i), [&] { return PolicySpec::parse(labels[i]); }));
  }
  if (root.has("metrics")) {
    s.metrics.clear();
    const auto names = root.strings("metrics");
    for (std::size_t i = 0; i < names.size(); ++i)
      s.metrics.push_back(rethrow_at("/metrics/" + std::to_string(i), [&] { return parse_metric(names[i]); }));
  }
  if (root.has("methods")) {
    s.methods.clear();
    const auto names = root.strings("methods");
    for (std::size_t i = 0; i < names.size(); ++i)
      s.methods.push_back(rethrow_at("/methods/" + std::to_string(i), [&] { return parse_method(names[i]); }));
  }
  if (root.has("cache_prob_files")) {
    const double v = root.number("cache_prob_files");
    if (v < 1 || v != std::floor(v)) throw ConfigError("/cache_prob_files: expected a positive integer");
    s.cache_prob_files = static_cast<std::size_t>(v);
  }
  if (root.has("local_search")) {
    Node n(root.raw("local_search"), "/local_search");
    if (n.has("restarts")) s.restarts = static_cast<int>(n.number("restarts"));
    n.finish();
  }
  if (root.has("simulation")) {
    Node n(root.raw("simulation"), "/simulation");
    SimulationBudget& b = s.simulation;
    const auto count = [&](const char* key) {
      const double v = n.number(key);
      if (v < 0 || v != std::floor(v)) throw ConfigError(n.child_path(key) + ": expected a non-negative integer");
      return v;
    };
    if (n.has("snapshots")) b.snapshots = static_cast<std::size_t>(count("snapshots"));
    if (n.has("seed")) b.seed = static_cast<std::uint64_t>(count("seed"));
    if (n.has("sinr_users")) b.sinr_users = static_cast<std::size_t>(count("sinr_users"));
    if (n.has("region_side_m")) b.region_side = n.number("region_side_m");
    if (n.has("time_budget_s")) b.time_budget = n.number("time_budget_s");
    n.finish();
  }
  if (root.has("output")) s.output = root.string("output");
  root.finish();

  rethrow_at("", [&] {
    s.validate();
    return 0;
  });
  return s;
}

ExperimentSpec load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open experiment file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_experiment(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace hetcache
