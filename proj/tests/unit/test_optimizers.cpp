#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "../support/brute_force.hpp"
#include "hetcache/errors.hpp"
#include "hetcache/optimizers.hpp"
#include "hetcache/specfun.hpp"

using namespace hetcache;

namespace {

NetworkConfig random_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  NetworkConfig c = NetworkConfig::reference();
  c.lambda_helper = c.lambda_macro * (5.0 + 195.0 * u(rng));
  c.lambda_user = c.lambda_helper * std::pow(10.0, -1.0 + 2.0 * u(rng));
  c.power_macro = dbm_to_watt(40.0 + 10.0 * u(rng));
  c.bias_helper = std::pow(10.0, 1.5 * u(rng));
  c.rate_target = 1e6 + 4e6 * u(rng);
  return c;
}

double offset(const NetworkConfig& c) {
  return c.lambda_macro / c.lambda_helper *
         std::pow(c.power_macro * c.bias_macro / (c.power_helper * c.bias_helper), 2.0 / c.alpha);
}

double ratio_objective(const Catalog& cat, std::span<const double> q, double c1, double c2) {
  double s = 0.0;
  for (std::size_t f = 0; f < cat.size(); ++f) s += cat.popularity(f) * q[f] / (c1 + c2 * q[f]);
  return s;
}

}  // namespace

TEST_SUITE("optimizers") {

TEST_CASE("water-filling satisfies its KKT conditions") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    WaterfillSpec spec;
    spec.weights.resize(50);
    for (double& w : spec.weights) w = u(rng);
    spec.gain = 0.1 + u(rng);
    spec.offset = 2.0 * u(rng);
    spec.budget = 1.0 + 20.0 * u(rng);
    const SolverReport r = waterfill(spec);
    CHECK(r.converged);
    CHECK(r.policy.sum() == doctest::Approx(spec.budget).epsilon(1e-12));
    CHECK(waterfill_kkt_residual(spec, r.policy.values(), r.multiplier) < 1e-9);
    for (std::size_t f = 0; f < 50; ++f) {
      const double expect = std::clamp(std::sqrt(spec.gain / r.multiplier * spec.weights[f]) - spec.offset, 0.0, 1.0);
      CHECK(r.policy[f] == doctest::Approx(expect).epsilon(1e-9));
    }
  }
}

TEST_CASE("water-filling edge cases") {
  WaterfillSpec spec{{0.5, 0.3, 0.2}, 1.0, 1.0, 5.0};
  SolverReport r = waterfill(spec);
  CHECK(r.policy.sum() == 3.0);
  CHECK(r.multiplier == 0.0);
  spec.budget = 0.0;
  r = waterfill(spec);
  CHECK(r.policy.sum() == 0.0);
  spec.weights = {0.5, 0.0, 0.5};
  spec.budget = 2.0;
  r = waterfill(spec);
  CHECK(r.policy[1] == 0.0);
  CHECK_THROWS_AS(waterfill({{}, 1.0, 1.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(waterfill({{1.0}, -1.0, 1.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(waterfill({{-1.0}, 1.0, 1.0, 1.0}), InvalidArgument);
}

TEST_CASE("association and lower-bound solvers match a refined lattice search") {
  std::mt19937_64 rng(2024);
  const Catalog cat(5, 2, 0.8);
  const std::vector<double> w(cat.popularity().begin(), cat.popularity().end());
  for (int t = 0; t < 3; ++t) {
    const NetworkConfig cfg = random_config(rng);
    const double c = offset(cfg);
    const SolverReport a = maximize_tier2_association(cfg, cat);
    const auto brute_a = testsupport::refined_lattice_search5(w, c, 1.0, 2.0);
    CHECK(ratio_objective(cat, a.policy.values(), c, 1.0) >= brute_a.value - 1e-12);
    CHECK(ratio_objective(cat, a.policy.values(), c, 1.0) == doctest::Approx(brute_a.value).epsilon(1e-6));
    for (int f = 0; f < 5; ++f) CHECK(std::abs(a.policy[f] - brute_a.q[f]) < 1e-3);

    const BoundConstants b = bound_constants(cfg, a.objective);
    const double c1 = b.c.c1 + b.active * b.c.c2, c2 = b.active * b.c.c3 + 1.0;
    const SolverReport lb = maximize_success_lower_bound(cfg, cat);
    const auto brute_lb = testsupport::refined_lattice_search5(w, c1, c2, 2.0);
    CHECK(ratio_objective(cat, lb.policy.values(), c1, c2) >= brute_lb.value - 1e-12);
    for (int f = 0; f < 5; ++f) CHECK(std::abs(lb.policy[f] - brute_lb.q[f]) < 1e-3);

    const double gamma = std::exp2(cfg.rate_target / cfg.bandwidth) - 1.0;
    const double s1 = kernels_c123(gamma, cfg).c1;
    const SolverReport sparse = optimal_low_density(cfg, cat);
    const auto brute_s = testsupport::refined_lattice_search5(w, s1, 1.0, 2.0);
    CHECK(ratio_objective(cat, sparse.policy.values(), s1, 1.0) == doctest::Approx(brute_s.value).epsilon(1e-6));
    for (int f = 0; f < 5; ++f) CHECK(std::abs(sparse.policy[f] - brute_s.q[f]) < 1e-3);
  }
}

TEST_CASE("association optimum value is the helper association of its policy") {
  const NetworkConfig cfg = NetworkConfig::reference();
  const Catalog cat(1000, 100, 0.5);
  const SolverReport r = maximize_tier2_association(cfg, cat);
  CHECK(r.objective == doctest::Approx(association(cfg, cat, r.policy).tier[kHelper]));
  CHECK(r.objective == doctest::Approx(0.4900540).epsilon(1e-6));
  CHECK(r.policy.sum() == doctest::Approx(100.0));
}

TEST_CASE("low-density optimum becomes the lower-bound optimum when users are sparse") {
  NetworkConfig cfg = NetworkConfig::reference();
  cfg.lambda_user = 1e-6 * cfg.lambda_helper;
  const Catalog cat(1000, 100, 0.5);
  const SolverReport lo = optimal_low_density(cfg, cat);
  const SolverReport lb = maximize_success_lower_bound(cfg, cat);
  for (std::size_t f = 0; f < cat.size(); ++f) CHECK(lo.policy[f] == doctest::Approx(lb.policy[f]).epsilon(1e-4));
}

TEST_CASE("high-density optimum becomes the lower-bound optimum when helpers are all busy") {
  NetworkConfig cfg = NetworkConfig::reference();
  cfg.lambda_user = 1e4 * cfg.lambda_helper;
  const Catalog cat(1000, 100, 0.5);
  const SolverReport hi = optimal_high_density(cfg, cat);
  const SolverReport lb = maximize_success_lower_bound(cfg, cat);
  for (std::size_t f = 0; f < cat.size(); ++f) CHECK(hi.policy[f] == doctest::Approx(lb.policy[f]).epsilon(1e-6));
}

TEST_CASE("capped simplex projection is a Euclidean projection") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.5, 0.7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 12;
    const double budget = 1.0 + 6.0 * u(rng);
    std::vector<double> x(n);
    for (double& v : x) v = g(rng);
    const std::vector<double> p = projection_capped_simplex(x, budget);
    double sum = 0.0;
    for (double v : p) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      sum += v;
    }
    CHECK(sum <= budget + 1e-12);
    // Variational inequality (x - p) . (y - p) <= 0 for feasible y.
    for (int k = 0; k < 200; ++k) {
      std::vector<double> y(n);
      for (double& v : y) v = u(rng);
      const double s = std::accumulate(y.begin(), y.end(), 0.0);
      if (s > budget)
        for (double& v : y) v *= budget / s;
      double ip = 0.0;
      for (std::size_t i = 0; i < n; ++i) ip += (x[i] - p[i]) * (y[i] - p[i]);
      CHECK(ip <= 1e-10);
    }
  }
  const std::vector<double> inside{0.2, 0.3};
  CHECK(projection_capped_simplex(inside, 1.0) == inside);
}

TEST_CASE("structured gradients agree with finite differences") {
  const NetworkConfig biased = NetworkConfig::reference();
  NetworkConfig equal = biased;
  equal.bias_helper = equal.bias_macro;
  const Catalog cat(40, 6, 0.9);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.05, 0.25);
  std::vector<double> q(cat.size());
  for (double& v : q) v = u(rng);

  const CoverageObjective cov(biased, cat);
  const AseObjective ase(biased, cat);
  const AseClosedFormObjective cf(equal, cat);
  for (const Objective* obj : {static_cast<const Objective*>(&cov), static_cast<const Objective*>(&ase),
                               static_cast<const Objective*>(&cf)}) {
    std::vector<double> g(q.size()), fd(q.size());
    obj->gradient(q, g);
    obj->fd_gradient(q, fd);
    double scale = 0.0;
    for (double v : fd) scale = std::max(scale, std::abs(v));
    for (std::size_t f = 0; f < q.size(); ++f) CHECK(std::abs(g[f] - fd[f]) < 1e-6 * scale + 1e-12);
  }
}

TEST_CASE("objectives are scaled copies of the analytic metrics") {
  const NetworkConfig cfg = NetworkConfig::reference();
  const Catalog cat(200, 20, 0.6);
  const CachingPolicy pol = CachingPolicy::uniform(cat);
  CHECK(CoverageObjective(cfg, cat).value(pol.values()) ==
        doctest::Approx(success_probability(cfg, cat, pol).success->total).epsilon(1e-13));
  CHECK(AseObjective(cfg, cat).value(pol.values()) ==
        doctest::Approx(*ase_quadrature(cfg, cat, pol).ase / cfg.lambda_macro).epsilon(1e-8));
}

TEST_CASE("local search finds the maximum of a concave separable objective") {
  const Catalog cat(30, 5, 1.0);
  const std::vector<double> w(cat.popularity().begin(), cat.popularity().end());
  const FunctionObjective obj([&](std::span<const double> q) { return ratio_objective(cat, q, 0.3, 1.0); });
  LocalSearchOptions opts;
  opts.restarts = 5;
  opts.stationarity_tol = 1e-7;
  opts.max_iterations = 5000;
  Rng rng(1);
  const SolverReport r = local_search(obj, cat, opts, rng);
  const SolverReport exact = waterfill({w, 0.3, 0.3, 5.0});
  CHECK(obj.value(r.policy.values()) == doctest::Approx(obj.value(exact.policy.values())).epsilon(1e-7));
  CHECK(r.restarts_used == 5);
}

TEST_CASE("local search never returns less than its seeds") {
  const NetworkConfig cfg = NetworkConfig::reference();
  const Catalog cat(100, 10, 0.5);
  const CoverageObjective obj(cfg, cat);
  LocalSearchOptions opts;
  opts.restarts = 4;
  opts.seeds = default_seeds(cfg, cat);
  Rng rng(8);
  const SolverReport r = local_search(obj, cat, opts, rng);
  for (const CachingPolicy& s : opts.seeds) CHECK(r.objective >= obj.value(s.values()) - 1e-14);
  CHECK(r.policy.sum() <= 10.0 + 1e-9);
}

TEST_CASE("local search is reproducible for a fixed generator seed") {
  const NetworkConfig cfg = NetworkConfig::reference();
  const Catalog cat(60, 6, 0.5);
  const CoverageObjective obj(cfg, cat);
  LocalSearchOptions opts;
  opts.restarts = 3;
  Rng a(5), b(5);
  const SolverReport ra = local_search(obj, cat, opts, a);
  const SolverReport rb = local_search(obj, cat, opts, b);
  for (std::size_t f = 0; f < cat.size(); ++f) CHECK(ra.policy[f] == rb.policy[f]);
}

TEST_CASE("non-finite objectives surface as numeric failures with the policy attached") {
  const Catalog cat(4, 2, 0.5);
  const FunctionObjective obj([](std::span<const double> q) { return q[0] > 0.7 ? std::nan("") : q[0]; });
  LocalSearchOptions opts;
  opts.restarts = 1;
  opts.seeds = {CachingPolicy({0.9, 0.5, 0.3, 0.3}, 2.0)};
  Rng rng(1);
  try {
    local_search(obj, cat, opts, rng);
    FAIL("expected NumericFailure");
  } catch (const NumericFailure& e) {
    CHECK(e.policy().size() == 4);
  }
}

}
