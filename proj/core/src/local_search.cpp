#include <algorithm>
#include <cmath>
#include <numeric>

#include "hetcache/errors.hpp"
#include "hetcache/optimizers.hpp"

namespace hetcache {

void Objective::gradient(std::span<const double> q, std::span<double> grad) const { fd_gradient(q, grad); }

void Objective::fd_gradient(std::span<const double> q, std::span<double> grad) const {
  std::vector<double> x(q.begin(), q.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + fd_step;
    const double up = value(x);
    x[i] = saved - fd_step;
    const double down = value(x);
    x[i] = saved;
    grad[i] = (up - down) / (2.0 * fd_step);
  }
}

namespace {

double checked(const Objective& obj, std::span<const double> q) {
  const double v = obj.value(q);
  if (!std::isfinite(v)) throw NumericFailure("objective is not finite", std::vector<double>(q.begin(), q.end()));
  return v;
}

// ||P(q + g) - q||, zero exactly at a stationary point of the constrained problem.
double projected_gradient_norm(std::span<const double> q, std::span<const double> g, double budget) {
  std::vector<double> x(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) x[i] = q[i] + g[i];
  x = projection_capped_simplex(x, budget);
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) s += (x[i] - q[i]) * (x[i] - q[i]);
  return std::sqrt(s);
}

struct Ascent {
  std::vector<double> q;
  double value = 0.0;
  int iterations = 0;
  bool stationary = false;
};

Ascent ascend(const Objective& obj, std::vector<double> q, double budget, const LocalSearchOptions& opt) {
  const std::size_t n = q.size();
  Ascent a;
  a.value = checked(obj, q);
  std::vector<double> g(n), trial(n);
  for (; a.iterations < opt.max_iterations; ++a.iterations) {
    obj.gradient(q, g);
    double gmax = 0.0;
    for (double v : g) gmax = std::max(gmax, std::abs(v));
    if (gmax == 0.0 || projected_gradient_norm(q, g, budget) <= opt.stationarity_tol) {
      a.stationary = true;
      break;
    }
    // The step is scaled so the steepest coordinate moves at most initial_step.
    double t = opt.initial_step / gmax;
    bool accepted = false;
    for (int halving = 0; halving < 40; ++halving, t *= 0.5) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = q[i] + t * g[i];
      trial = projection_capped_simplex(trial, budget);
      double ascent = 0.0;
      for (std::size_t i = 0; i < n; ++i) ascent += g[i] * (trial[i] - q[i]);
      const double v = checked(obj, trial);
      if (v >= a.value + opt.armijo * ascent && ascent > 0.0) {
        q.swap(trial);
        a.value = v;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  a.q = std::move(q);
  return a;
}

}  // namespace

SolverReport local_search(const Objective& objective, const Catalog& catalog, const LocalSearchOptions& options,
                          Rng& rng) {
  if (options.restarts < 1 && options.seeds.empty()) throw InvalidArgument("local search needs at least one start");
  if (!(options.initial_step > 0.0) || !(options.armijo > 0.0 && options.armijo < 1.0))
    throw InvalidArgument("invalid line-search parameters");
  const std::size_t n = catalog.size();
  const double budget = static_cast<double>(catalog.cache_size());
  const int starts = std::max<int>(options.restarts, static_cast<int>(options.seeds.size()));

  SolverReport best;
  double best_value = -std::numeric_limits<double>::infinity();
  std::vector<double> best_q;
  bool best_stationary = false;
  int total_iterations = 0;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (int s = 0; s < starts; ++s) {
    std::vector<double> q0(n);
    if (s < static_cast<int>(options.seeds.size())) {
      const CachingPolicy& seed = options.seeds[static_cast<std::size_t>(s)];
      if (seed.size() != n) throw InvalidArgument("seed policy length differs from catalog size");
      q0.assign(seed.values().begin(), seed.values().end());
    } else {
      for (double& v : q0) v = unit(rng);
    }
    Ascent a = ascend(objective, projection_capped_simplex(q0, budget), budget, options);
    total_iterations += a.iterations;
    if (a.value > best_value) {
      best_value = a.value;
      best_q = std::move(a.q);
      best_stationary = a.stationary;
    }
  }

  best.objective = best_value;
  best.iterations = total_iterations;
  best.restarts_used = starts;
  best.converged = best_stationary;
  if (options.final_check) {
    std::vector<double> g(n);
    objective.fd_gradient(best_q, g);
    best.converged = projected_gradient_norm(best_q, g, budget) <= options.stationarity_tol;
  }
  if (!best.converged) best.warnings.emplace_back("best start did not reach the stationarity tolerance");
  best.policy = CachingPolicy(std::move(best_q), budget);
  return best;
}

}  // namespace hetcache
