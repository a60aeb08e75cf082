#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "hetcache/analytics.hpp"
#include "hetcache/model.hpp"
#include "hetcache/rate_table.hpp"

namespace hetcache {

/// Generic water-filling: q_f = clip(sqrt(gain/mu) * sqrt(w_f) - offset, 0, 1)
/// with mu chosen so that sum(q) = budget (or every q_f = 1 if that fits).
struct WaterfillSpec {
  std::vector<double> weights;
  double gain = 1.0;
  double offset = 1.0;
  double budget = 0.0;
};

struct SolverReport {
  CachingPolicy policy;
  double multiplier = 0.0;  ///< mu; 0 when the budget does not bind
  double objective = 0.0;
  int iterations = 0;
  int restarts_used = 0;
  bool converged = false;
  std::vector<std::string> warnings;
};

/// Objective reported is sum w_f q_f / (offset + q_f).
SolverReport waterfill(const WaterfillSpec& spec);

/// Optimal KKT residual of a water-filling solution; zero at the optimum.
double waterfill_kkt_residual(const WaterfillSpec& spec, std::span<const double> q, double multiplier);

/// Maximizes the probability of associating with the helper tier.
SolverReport maximize_tier2_association(const NetworkConfig& cfg, const Catalog& catalog);

/// Maximizes the helper-tier coverage lower bound built from the optimum of
/// maximize_tier2_association.
SolverReport maximize_success_lower_bound(const NetworkConfig& cfg, const Catalog& catalog);

/// Optimum of the lower bound when every helper is active.
SolverReport optimal_high_density(const NetworkConfig& cfg, const Catalog& catalog);

/// Optimum when helpers are almost never loaded: single-user threshold and
/// no helper interference.
SolverReport optimal_low_density(const NetworkConfig& cfg, const Catalog& catalog);

/// Helper-tier coverage lower bound for a policy, using the association
/// optimum as the bound on helper association.
EvalReport success_lower_bound(const NetworkConfig& cfg, const Catalog& catalog, const CachingPolicy& policy);

/// Euclidean projection onto {q in [0,1]^n : sum q <= budget}.
std::vector<double> projection_capped_simplex(std::span<const double> q, double budget);

/// Smooth objective over caching policies for local search.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual double value(std::span<const double> q) const = 0;
  /// Default implementation: central differences with step fd_step.
  virtual void gradient(std::span<const double> q, std::span<double> grad) const;
  double fd_step = 1e-5;

  /// Always central differences, used for the final stationarity check.
  void fd_gradient(std::span<const double> q, std::span<double> grad) const;
};

/// Objective defined by a callable; gradient by finite differences.
class FunctionObjective final : public Objective {
 public:
  explicit FunctionObjective(std::function<double(std::span<const double>)> f) : f_(std::move(f)) {}
  double value(std::span<const double> q) const override { return f_(q); }

 private:
  std::function<double(std::span<const double>)> f_;
};

/// Total rate-coverage probability. Gradient uses the per-file structure
/// and differences only the scalar load coupling.
class CoverageObjective final : public Objective {
 public:
  CoverageObjective(NetworkConfig cfg, Catalog catalog);
  double value(std::span<const double> q) const override;
  void gradient(std::span<const double> q, std::span<double> grad) const override;

 private:
  NetworkConfig cfg_;
  Catalog catalog_;
  double offset_;
};

/// ASE from the tabulated rate integrals, in units of the macro density.
class AseObjective final : public Objective {
 public:
  AseObjective(NetworkConfig cfg, Catalog catalog);
  double value(std::span<const double> q) const override;
  void gradient(std::span<const double> q, std::span<double> grad) const override;

 private:
  double value_at(std::span<const double> q, double helper_association) const;
  NetworkConfig cfg_;
  Catalog catalog_;
  std::shared_ptr<const RateTable> table_;
  double offset_;
};

/// ASE closed form (equal biases only), in units of the macro density.
class AseClosedFormObjective final : public Objective {
 public:
  AseClosedFormObjective(NetworkConfig cfg, Catalog catalog);
  double value(std::span<const double> q) const override;
  void gradient(std::span<const double> q, std::span<double> grad) const override;

 private:
  double value_at(std::span<const double> q, double helper_association) const;
  NetworkConfig cfg_;
  Catalog catalog_;
  double offset_;
};

struct LocalSearchOptions {
  int restarts = 100;               ///< total starts, seeds included
  std::vector<CachingPolicy> seeds;  ///< tried first, in order
  double initial_step = 0.1;         ///< largest per-coordinate move of a trial step
  double armijo = 1e-4;
  int max_iterations = 500;
  double stationarity_tol = 1e-4;
  bool final_check = true;           ///< re-verify stationarity by finite differences
};

/// Multi-start projected gradient ascent with Armijo backtracking.
SolverReport local_search(const Objective& objective, const Catalog& catalog, const LocalSearchOptions& options,
                          Rng& rng);

/// Popular, uniform and the lower-bound optimum, the usual seeds.
std::vector<CachingPolicy> default_seeds(const NetworkConfig& cfg, const Catalog& catalog);

}  // namespace hetcache
