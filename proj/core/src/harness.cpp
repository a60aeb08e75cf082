#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "harness_internal.hpp"
#include "hetcache/errors.hpp"
#include "hetcache/optimizers.hpp"
#include "hetcache/simulator.hpp"

namespace hetcache {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct GridPoint {
  double sweep = 0.0;
  std::optional<double> series;
  std::size_t index = 0;
};

detail::Scenario scenario_at(const ExperimentSpec& spec, const GridPoint& pt) {
  detail::Scenario s{spec.network, spec.n_files, spec.cache_size, spec.zipf_skew};
  detail::apply_variable(s, spec.sweep.variable, pt.sweep);
  if (pt.series) detail::apply_variable(s, spec.series->variable, *pt.series);
  if (spec.area_cache) {
    const double nc = std::round(*spec.area_cache / s.cfg.lambda_helper);
    s.cache_size = static_cast<std::size_t>(std::clamp(nc, 1.0, static_cast<double>(s.n_files)));
  }
  return s;
}

std::string policy_label(const ExperimentSpec& spec, const PolicySpec& p, const GridPoint& pt) {
  std::string label = p.label();
  if (pt.series) label += "|" + spec.series->variable + "=" + detail::format_number(*pt.series);
  return label;
}

bool wants_simulation(const ExperimentSpec& spec, const PolicySpec& p) {
  if (std::find(spec.methods.begin(), spec.methods.end(), Method::Simulation) == spec.methods.end()) return false;
  for (Metric m : spec.metrics)
    if (detail::defined(p.kind, m, Method::Simulation)) return true;
  return false;
}

/// Everything computed for one (sweep point, policy) pair.
class Unit {
 public:
  Unit(const ExperimentSpec& spec, const GridPoint& pt, const PolicySpec& policy, std::size_t policy_index,
       std::size_t snapshots)
      : spec_(spec), pt_(pt), policy_(policy), policy_index_(policy_index), snapshots_(snapshots) {}

  std::vector<ResultRow> run(std::vector<std::string>& warnings) {
    const std::string label = policy_label(spec_, policy_, pt_);
    std::vector<ResultRow> rows;
    std::optional<std::string> setup_error;
    try {
      scenario_ = scenario_at(spec_, pt_);
      scenario_->cfg.validate();
      catalog_.emplace(scenario_->n_files, scenario_->cache_size, scenario_->zipf_skew);
      const std::uint64_t ls_seed = snapshot_seed(spec_.simulation.seed ^ 0x9e3779b97f4a7c15ULL,
                                                  pt_.index * spec_.policies.size() + policy_index_);
      policy_values_ = resolve_policy(policy_, scenario_->cfg, *catalog_, spec_.restarts, ls_seed);
    } catch (const std::exception& e) {
      setup_error = e.what();
    }

    for (Metric metric : spec_.metrics) {
      for (Method method : spec_.methods) {
        if (!detail::defined(policy_.kind, metric, method)) continue;
        for (const std::string& name : metric_names(metric)) {
          ResultRow row;
          row.sweep = pt_.sweep;
          row.policy = label;
          row.metric = name;
          row.method = method;
          row.ci = kNaN;
          if (setup_error) {
            fail(row, *setup_error, warnings);
          } else {
            try {
              auto [v, ci] = evaluate(metric, method, rows_for_metric_index(metric, name));
              row.value = v;
              row.ci = method == Method::Simulation ? ci : kNaN;
              if (!std::isfinite(row.value)) throw NumericFailure("non-finite result");
            } catch (const std::exception& e) {
              fail(row, e.what(), warnings);
            }
          }
          rows.push_back(std::move(row));
        }
      }
    }
    return rows;
  }

 private:
  void fail(ResultRow& row, const std::string& why, std::vector<std::string>& warnings) {
    row.value = kNaN;
    row.ci = kNaN;
    row.status = "failed";
    warnings.push_back("cell " + spec_.sweep.variable + "=" + detail::format_number(row.sweep) + " policy=" +
                       row.policy + " metric=" + row.metric + " method=" + to_string(row.method) + ": " + why);
  }

  std::vector<std::string> metric_names(Metric metric) const {
    if (metric == Metric::CacheProbability) {
      std::vector<std::string> out;
      const std::size_t n = std::min(spec_.cache_prob_files, spec_.n_files);
      for (std::size_t f = 0; f < n; ++f) out.push_back("cache_prob[" + std::to_string(f + 1) + "]");
      return out;
    }
    if (metric == Metric::HelperDensity) {
      std::vector<std::string> out;
      for (double t : spec_.targets) out.push_back("helper_density[" + detail::format_number(t) + "]");
      return out;
    }
    return {to_string(metric)};
  }

  std::size_t rows_for_metric_index(Metric metric, const std::string& name) const {
    const auto names = metric_names(metric);
    return static_cast<std::size_t>(std::find(names.begin(), names.end(), name) - names.begin());
  }

  bool traditional() const { return policy_.kind == PolicyKind::Traditional; }

  const EvalReport& analytic_success() {
    if (!success_) success_ = success_probability(scenario_->cfg, *catalog_, *policy_values_);
    return *success_;
  }

  const SimulationSummary& simulation() {
    if (!sim_) {
      SimOptions opt;
      opt.region.side = spec_.simulation.region_side;
      opt.snapshots = snapshots_;
      opt.seed = snapshot_seed(spec_.simulation.seed, pt_.index);
      opt.sinr_users = spec_.simulation.sinr_users;
      const double target[] = {scenario_->cfg.rate_target};
      std::optional<TraditionalConfig> trad;
      if (traditional()) trad = TraditionalConfig{policy_.backhaul_capacity};
      sim_ = run_simulation(scenario_->cfg, *catalog_, *policy_values_, opt, target, trad);
    }
    return *sim_;
  }

  std::pair<double, double> evaluate(Metric metric, Method method, std::size_t sub) {
    const NetworkConfig& cfg = scenario_->cfg;
    const Catalog& cat = *catalog_;
    const CachingPolicy& pol = *policy_values_;
    if (method == Method::Simulation) {
      const SimulationSummary& s = simulation();
      const EstimateReport* e = nullptr;
      switch (metric) {
        case Metric::Success: e = &s.success[0]; break;
        case Metric::SuccessMacro: e = &s.success_macro[0]; break;
        case Metric::SuccessHelper: e = &s.success_helper[0]; break;
        case Metric::Ase: e = &s.ase; break;
        case Metric::HelperAssociation: e = &s.helper_association; break;
        case Metric::HelperActive: e = &s.helper_active; break;
        default: throw UnsupportedConfiguration("metric has no simulation estimate");
      }
      return {e->mean, e->ci_half_width};
    }
    switch (metric) {
      case Metric::Success:
        if (method == Method::LowerBound) {
          const EvalReport lb = success_lower_bound(cfg, cat, pol);
          return {lb.success->tier[kHelper] + analytic_success().success->tier[kMacro], kNaN};
        }
        return {analytic_success().success->total, kNaN};
      case Metric::SuccessMacro: return {analytic_success().success->tier[kMacro], kNaN};
      case Metric::SuccessHelper:
        if (method == Method::LowerBound) return {success_lower_bound(cfg, cat, pol).success->tier[kHelper], kNaN};
        return {analytic_success().success->tier[kHelper], kNaN};
      case Metric::Ase: {
        if (traditional()) {
          const TraditionalConfig trad{policy_.backhaul_capacity};
          const EvalReport r = method == Method::ClosedForm ? traditional_ase_closed_form(cfg, trad)
                                                            : traditional_ase_quadrature(cfg, trad);
          return {*r.ase, kNaN};
        }
        const EvalReport r = method == Method::ClosedForm ? ase_closed_form(cfg, cat, pol) : ase_quadrature(cfg, cat, pol);
        return {*r.ase, kNaN};
      }
      case Metric::HelperAssociation: return {association(cfg, cat, pol).tier[kHelper], kNaN};
      case Metric::HelperActive: return {load_report(cfg, cat, pol).active[kHelper], kNaN};
      case Metric::CacheProbability: return {pol[sub], kNaN};
      case Metric::HelperDensity: return {tradeoff_solve(spec_.targets[sub], cat.cache_size(), cfg, cat), kNaN};
    }
    throw UnsupportedConfiguration("unhandled metric");
  }

  const ExperimentSpec& spec_;
  GridPoint pt_;
  PolicySpec policy_;
  std::size_t policy_index_;
  std::size_t snapshots_;
  std::optional<detail::Scenario> scenario_;
  std::optional<Catalog> catalog_;
  std::optional<CachingPolicy> policy_values_;
  std::optional<EvalReport> success_;
  std::optional<SimulationSummary> sim_;
};

std::vector<GridPoint> grid_points(const ExperimentSpec& spec) {
  std::vector<GridPoint> pts;
  for (double v : spec.sweep.values) {
    if (spec.series) {
      for (double s : spec.series->values) pts.push_back({v, s, pts.size()});
    } else {
      pts.push_back({v, std::nullopt, pts.size()});
    }
  }
  return pts;
}

/// Snapshot count that fits the time budget, estimated from a short pilot at
/// the densest grid point.
std::size_t budgeted_snapshots(const ExperimentSpec& spec, const std::vector<GridPoint>& pts, std::size_t requested,
                               unsigned threads, std::vector<std::string>& warnings) {
  if (spec.simulation.time_budget <= 0.0) return requested;
  std::size_t sim_units = 0;
  for (const PolicySpec& p : spec.policies) sim_units += wants_simulation(spec, p) ? 1 : 0;
  sim_units *= pts.size();
  if (sim_units == 0) return requested;

  std::optional<detail::Scenario> densest;
  for (const GridPoint& pt : pts) {
    try {
      detail::Scenario s = scenario_at(spec, pt);
      const double load = s.cfg.lambda_helper + s.cfg.lambda_user;
      if (!densest || load > densest->cfg.lambda_helper + densest->cfg.lambda_user) densest = s;
    } catch (const ConfigError&) {
    }
  }
  if (!densest) return requested;

  constexpr std::size_t kPilot = 5;
  try {
    const Catalog cat(densest->n_files, densest->cache_size, densest->zipf_skew);
    SimOptions opt;
    opt.region.side = spec.simulation.region_side;
    opt.snapshots = kPilot;
    opt.seed = spec.simulation.seed;
    opt.sinr_users = spec.simulation.sinr_users;
    const double target[] = {densest->cfg.rate_target};
    const auto t0 = std::chrono::steady_clock::now();
    run_simulation(densest->cfg, cat, CachingPolicy::popular(cat), opt, target);
    const double per_snapshot =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / kPilot;
    const double estimate = per_snapshot * static_cast<double>(requested * sim_units) / std::max(1u, threads);
    if (estimate <= spec.simulation.time_budget) return requested;
    const double fit = spec.simulation.time_budget * std::max(1u, threads) / (per_snapshot * sim_units);
    const std::size_t reduced = std::max<std::size_t>(2, static_cast<std::size_t>(fit));
    if (reduced < requested) {
      warnings.push_back("simulation budget: reduced snapshots per cell from " + std::to_string(requested) + " to " +
                         std::to_string(reduced) + " to fit " +
                         detail::format_number(spec.simulation.time_budget) + " s");
      return reduced;
    }
  } catch (const std::exception& e) {
    warnings.push_back(std::string("simulation budget: pilot failed, keeping requested snapshots: ") + e.what());
  }
  return requested;
}

}  // namespace

bool ResultTable::any_failed() const {
  return std::any_of(rows.begin(), rows.end(), [](const ResultRow& r) { return r.status != "ok"; });
}

CachingPolicy resolve_policy(const PolicySpec& policy, const NetworkConfig& cfg, const Catalog& catalog,
                             int restarts, std::uint64_t seed) {
  switch (policy.kind) {
    case PolicyKind::Popular: return CachingPolicy::popular(catalog);
    case PolicyKind::Uniform: return CachingPolicy::uniform(catalog);
    case PolicyKind::LowerBound: return maximize_success_lower_bound(cfg, catalog).policy;
    case PolicyKind::Tier2Association: return maximize_tier2_association(cfg, catalog).policy;
    case PolicyKind::HighDensity: return optimal_high_density(cfg, catalog).policy;
    case PolicyKind::LowDensity: return optimal_low_density(cfg, catalog).policy;
    case PolicyKind::Traditional: return CachingPolicy::everything(catalog.size());
    case PolicyKind::MaxSuccess:
    case PolicyKind::MaxAse: {
      LocalSearchOptions opts;
      opts.restarts = restarts;
      opts.seeds = default_seeds(cfg, catalog);
      Rng rng(seed);
      if (policy.kind == PolicyKind::MaxSuccess) return local_search(CoverageObjective(cfg, catalog), catalog, opts, rng).policy;
      return local_search(AseObjective(cfg, catalog), catalog, opts, rng).policy;
    }
  }
  throw InvalidArgument("unknown policy kind");
}

ResultTable run_experiment(const ExperimentSpec& spec_in, const RunOptions& options) {
  ExperimentSpec spec = spec_in;
  if (options.seed) spec.simulation.seed = *options.seed;
  if (options.snapshots) spec.simulation.snapshots = *options.snapshots;
  spec.validate();

  ResultTable table;
  table.sweep_variable = spec.sweep.variable;
  for (const std::string& w : spec.network.warnings()) table.warnings.push_back("network: " + w);

  const unsigned threads = std::max(1u, options.threads);
  const std::vector<GridPoint> pts = grid_points(spec);
  const std::size_t snapshots = budgeted_snapshots(spec, pts, spec.simulation.snapshots, threads, table.warnings);

  const std::size_t n_units = pts.size() * spec.policies.size();
  std::vector<std::vector<ResultRow>> slots(n_units);
  std::vector<std::vector<std::string>> slot_warnings(n_units);
  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;
  std::size_t done = 0;

  const auto worker = [&] {
    for (;;) {
      const std::size_t u = next.fetch_add(1);
      if (u >= n_units) return;
      const GridPoint& pt = pts[u / spec.policies.size()];
      const std::size_t p = u % spec.policies.size();
      Unit unit(spec, pt, spec.policies[p], p, snapshots);
      slots[u] = unit.run(slot_warnings[u]);
      if (options.progress) {
        std::lock_guard lock(progress_mutex);
        ++done;
        *options.progress << "[" << done << "/" << n_units << "] " << spec.sweep.variable << "="
                          << detail::format_number(pt.sweep) << " " << policy_label(spec, spec.policies[p], pt) << "\n"
                          << std::flush;
      }
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t u = 0; u < n_units; ++u) {
    for (ResultRow& r : slots[u]) table.rows.push_back(std::move(r));
    for (std::string& w : slot_warnings[u]) table.warnings.push_back(std::move(w));
  }
  return table;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_number(double v) { return std::isfinite(v) ? detail::format_number(v) : std::string(); }

/// Splits one CSV record; quoted fields may contain separators and newlines.
bool read_record(std::istream& is, std::vector<std::string>& fields) {
  fields.clear();
  if (is.peek() == std::char_traits<char>::eof()) return false;
  std::string field;
  bool quoted = false;
  for (;;) {
    const int c = is.get();
    if (c == std::char_traits<char>::eof()) {
      if (quoted) throw IoError("csv: unterminated quoted field");
      fields.push_back(field);
      return true;
    }
    if (quoted) {
      if (c == '"') {
        if (is.peek() == '"') {
          field += '"';
          is.get();
        } else {
          quoted = false;
        }
      } else {
        field += static_cast<char>(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && is.peek() == '\n') is.get();
      fields.push_back(std::move(field));
      return true;
    } else {
      field += static_cast<char>(c);
    }
  }
}

double parse_double(const std::string& s, bool allow_empty) {
  if (s.empty()) {
    if (allow_empty) return kNaN;
    throw IoError("csv: empty numeric field");
  }
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw IoError("csv: bad number '" + s + "'");
  return v;
}

constexpr const char* kHeader = "sweep,policy,metric,method,value,ci,status";

}  // namespace

void write_csv(const ResultTable& table, std::ostream& os) {
  os << kHeader << "\r\n";
  for (const ResultRow& r : table.rows) {
    os << csv_number(r.sweep) << ',' << csv_field(r.policy) << ',' << csv_field(r.metric) << ','
       << to_string(r.method) << ',' << csv_number(r.value) << ',' << csv_number(r.ci) << ',' << csv_field(r.status)
       << "\r\n";
  }
}

void emit_csv(const ResultTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_csv(table, out);
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

ResultTable read_csv(std::istream& is) {
  ResultTable table;
  std::vector<std::string> f;
  if (!read_record(is, f)) throw IoError("csv: missing header");
  std::string header;
  for (std::size_t i = 0; i < f.size(); ++i) header += (i ? "," : "") + f[i];
  if (header != kHeader) throw IoError("csv: unexpected header '" + header + "'");
  while (read_record(is, f)) {
    if (f.size() == 1 && f[0].empty()) continue;
    if (f.size() != 7) throw IoError("csv: expected 7 fields, got " + std::to_string(f.size()));
    ResultRow r;
    r.sweep = parse_double(f[0], false);
    r.policy = f[1];
    r.metric = f[2];
    bool known = false;
    for (Method m : {Method::Analytic, Method::LowerBound, Method::ClosedForm, Method::Simulation})
      if (to_string(m) == f[3]) {
        r.method = m;
        known = true;
      }
    if (!known) throw IoError("csv: unknown method '" + f[3] + "'");
    r.value = parse_double(f[4], true);
    r.ci = parse_double(f[5], true);
    r.status = f[6];
    table.rows.push_back(std::move(r));
  }
  return table;
}

ResultTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_csv(in);
}

double tradeoff_solve(double target_ase, std::size_t cache_size, const NetworkConfig& cfg, const Catalog& catalog) {
  if (!(target_ase > 0.0) || !std::isfinite(target_ase)) throw InvalidArgument("target ASE must be positive");
  const Catalog cat(catalog.size(), cache_size, catalog.zipf_skew());
  const CachingPolicy popular = CachingPolicy::popular(cat);
  const auto ase_at = [&](double lambda_helper) {
    NetworkConfig c = cfg;
    c.lambda_helper = lambda_helper;
    return *ase_closed_form(c, cat, popular).ase;
  };
  double lo = cfg.lambda_macro, hi = 1e4 * cfg.lambda_macro;
  const double f_lo = ase_at(lo) - target_ase, f_hi = ase_at(hi) - target_ase;
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0))
    throw InfeasibleTarget("target ASE " + detail::format_number(target_ase) + " is outside [" +
                           detail::format_number(f_lo + target_ase) + ", " + detail::format_number(f_hi + target_ase) +
                           "] reachable with helper densities in [lambda_macro, 1e4 lambda_macro]");
  const bool rising = f_hi > 0.0;
  for (int it = 0; it < 200 && hi / lo - 1.0 > 1e-13; ++it) {
    const double mid = std::sqrt(lo * hi);
    const bool above = ase_at(mid) > target_ase;
    if (above == rising) hi = mid;
    else lo = mid;
  }
  const double lambda = std::sqrt(lo * hi);
  const double rel = std::abs(ase_at(lambda) / target_ase - 1.0);
  if (rel > 1e-3) throw NumericFailure("trade-off bisection ended " + detail::format_number(rel) + " away from target");
  return lambda;
}

}  // namespace hetcache
