#include <cmath>
#include <numbers>

#include "hetcache/errors.hpp"
#include "hetcache/optimizers.hpp"
#include "internal.hpp"

namespace hetcache {

namespace {

std::vector<double> weights_of(const Catalog& catalog) {
  return {catalog.popularity().begin(), catalog.popularity().end()};
}

void require_helpers(const NetworkConfig& cfg) {
  cfg.validate();
  if (!detail::helpers_present(cfg))
    throw InvalidArgument("caching optimization needs helpers with positive density and bias");
}

// Maximizer of sum p_f q_f / (c1 + c2 q_f) under the cache budget.
SolverReport solve_ratio_program(const Catalog& catalog, double c1, double c2) {
  const double budget = static_cast<double>(catalog.cache_size());
  const double offset = c1 / c2;
  if (!(c2 > 0.0) || !std::isfinite(offset)) {
    // Offset beyond double range: the water level is flat and only the
    // ordering of popularities matters.
    SolverReport r;
    r.policy = CachingPolicy::popular(catalog);
    r.converged = true;
    r.warnings.emplace_back("water-filling offset overflowed; returned the popularity-ordered policy");
    return r;
  }
  SolverReport r = waterfill({weights_of(catalog), c1 / (c2 * c2), offset, budget});
  double obj = 0.0;
  for (std::size_t f = 0; f < catalog.size(); ++f) {
    const double q = r.policy[f];
    if (q > 0.0) obj += catalog.popularity(f) * q / (c1 + c2 * q);
  }
  r.objective = obj;
  return r;
}

}  // namespace

SolverReport maximize_tier2_association(const NetworkConfig& cfg, const Catalog& catalog) {
  require_helpers(cfg);
  const double c = detail::association_offset(cfg);
  SolverReport r = solve_ratio_program(catalog, c, 1.0);
  r.objective = association(cfg, catalog, r.policy).tier[kHelper];
  return r;
}

SolverReport maximize_success_lower_bound(const NetworkConfig& cfg, const Catalog& catalog) {
  const SolverReport upper = maximize_tier2_association(cfg, catalog);
  const BoundConstants b = bound_constants(cfg, upper.objective);
  return solve_ratio_program(catalog, b.c.c1 + b.active * b.c.c2, b.active * b.c.c3 + 1.0);
}

SolverReport optimal_high_density(const NetworkConfig& cfg, const Catalog& catalog) {
  const SolverReport upper = maximize_tier2_association(cfg, catalog);
  const BoundConstants b = bound_constants(cfg, upper.objective);
  return solve_ratio_program(catalog, b.c.c1 + b.c.c2, b.c.c3 + 1.0);
}

SolverReport optimal_low_density(const NetworkConfig& cfg, const Catalog& catalog) {
  require_helpers(cfg);
  const double x = detail::rate_threshold(cfg.rate_target, cfg.bandwidth, 1.0, 1.0);
  return solve_ratio_program(catalog, kernels_c123(x, cfg).c1, 1.0);
}

EvalReport success_lower_bound(const NetworkConfig& cfg, const Catalog& catalog, const CachingPolicy& policy) {
  return success_lower_bound(cfg, catalog, policy, maximize_tier2_association(cfg, catalog).objective);
}

std::vector<CachingPolicy> default_seeds(const NetworkConfig& cfg, const Catalog& catalog) {
  std::vector<CachingPolicy> seeds{CachingPolicy::popular(catalog), CachingPolicy::uniform(catalog)};
  if (detail::helpers_present(cfg)) seeds.push_back(maximize_success_lower_bound(cfg, catalog).policy);
  return seeds;
}

}  // namespace hetcache
