#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hetcache/analytics.hpp"
#include "hetcache/model.hpp"

namespace hetcache {

enum class Metric {
  Success,            ///< total rate coverage
  SuccessMacro,
  SuccessHelper,
  Ase,                ///< nat/s/Hz/m^2
  HelperAssociation,
  HelperActive,
  CacheProbability,   ///< one row per file rank, "cache_prob[f]"
  HelperDensity,      ///< density reaching each target ASE, "helper_density[target]"
};
std::string to_string(Metric m);

enum class PolicyKind {
  Popular,
  Uniform,
  LowerBound,          ///< optimum of the helper coverage lower bound
  MaxSuccess,          ///< multi-start local search on total coverage
  MaxAse,              ///< multi-start local search on the ASE
  Tier2Association,    ///< maximizes helper association only
  HighDensity,
  LowDensity,
  Traditional,         ///< no caches, capped backhaul
};

struct PolicySpec {
  PolicyKind kind = PolicyKind::Popular;
  double backhaul_capacity = 0.0;  ///< bit/s, Traditional only

  /// "popular", "uniform", "lower_bound", "max_success", "max_ase",
  /// "tier2_association", "high_density", "low_density", "traditional:<bit/s>".
  static PolicySpec parse(std::string_view label);
  std::string label() const;
};

/// One swept quantity. Values are in SI units except where the variable name
/// says otherwise (ratios, dB, dBm).
struct SweepAxis {
  std::string variable;
  std::vector<double> values;
};

/// Names accepted as sweep or series variables.
const std::vector<std::string>& sweep_variables();

struct SimulationBudget {
  std::size_t snapshots = 2000;
  std::uint64_t seed = 1;
  std::size_t sinr_users = 256;
  double region_side = 3000.0;  ///< m
  double time_budget = 0.0;     ///< s for all simulation cells; 0 disables the check
};

/**
 * Everything needed to regenerate one table. The cell grid is
 * sweep x series x policy x metric x method; (metric, method) pairs that a
 * policy does not define are not part of the grid, so every emitted row has
 * a value or a failure status.
 */
struct ExperimentSpec {
  std::string id = "custom";
  NetworkConfig network = NetworkConfig::reference();
  std::size_t n_files = 1000;
  std::size_t cache_size = 100;
  double zipf_skew = 0.5;

  SweepAxis sweep;
  std::optional<SweepAxis> series;   ///< second variable, folded into the policy column
  std::optional<double> area_cache;  ///< fixes lambda_helper * cache_size (m^-2) when set
  std::vector<double> targets;       ///< ASE targets for HelperDensity, nat/s/Hz/m^2

  std::vector<PolicySpec> policies;
  std::vector<Metric> metrics;
  std::size_t cache_prob_files = 200;
  std::vector<Method> methods;

  int restarts = 20;  ///< local-search starts for MaxSuccess / MaxAse
  SimulationBudget simulation;
  std::string output;

  /// Throws ConfigError naming the offending key.
  void validate() const;
};

/// Defaults for fig3 .. fig9; "custom" returns the reference network with
/// everything else empty. Throws ConfigError for unknown ids.
ExperimentSpec named_experiment(std::string_view id);
std::vector<std::string> named_experiment_ids();

/// Parses a JSON experiment document (schema_version 1). Keys present in the
/// document override the defaults of the named experiment it refers to.
ExperimentSpec parse_experiment(std::string_view text);
ExperimentSpec load_experiment(const std::filesystem::path& path);

struct ResultRow {
  double sweep = 0.0;
  std::string policy;
  std::string metric;
  Method method = Method::Analytic;
  double value = 0.0;  ///< NaN when the cell failed
  double ci = 0.0;     ///< NaN unless method is Simulation
  std::string status = "ok";
};

struct ResultTable {
  std::string sweep_variable;
  std::vector<ResultRow> rows;
  std::vector<std::string> warnings;

  bool any_failed() const;
};

struct RunOptions {
  unsigned threads = 1;
  std::optional<std::uint64_t> seed;         ///< overrides spec.simulation.seed
  std::optional<std::size_t> snapshots;      ///< overrides spec.simulation.snapshots
  std::ostream* progress = nullptr;
};

/// Computes every cell. Numeric failures mark the cell and the run goes on.
/// Simulation cells draw from snapshot streams keyed by the sweep point, so
/// all policies at one point share geometry and the table does not depend on
/// the thread count.
ResultTable run_experiment(const ExperimentSpec& spec, const RunOptions& options = {});

/// Caching policy a spec entry resolves to at one configuration.
CachingPolicy resolve_policy(const PolicySpec& policy, const NetworkConfig& cfg, const Catalog& catalog,
                             int restarts, std::uint64_t seed);

/// CSV with header sweep,policy,metric,method,value,ci,status.
void write_csv(const ResultTable& table, std::ostream& os);
void emit_csv(const ResultTable& table, const std::filesystem::path& path);
ResultTable read_csv(std::istream& is);
ResultTable read_csv(const std::filesystem::path& path);

/// Helper density at which the closed-form ASE of the Popular policy with the
/// given cache size hits target_ase. Searches [lambda_macro, 1e4 lambda_macro]
/// by bisection; the user density is kept. Throws InfeasibleTarget when the
/// target lies outside the bracket's ASE range.
double tradeoff_solve(double target_ase, std::size_t cache_size, const NetworkConfig& cfg, const Catalog& catalog);

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast self-checks of the numerical building blocks against frozen values
/// and internal identities.
std::vector<ValidationCheck> run_validation();

}  // namespace hetcache
