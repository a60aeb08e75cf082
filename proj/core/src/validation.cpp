#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "harness_internal.hpp"
#include "hetcache/errors.hpp"
#include "hetcache/optimizers.hpp"
#include "hetcache/rate_table.hpp"
#include "hetcache/simulator.hpp"
#include "hetcache/specfun.hpp"

namespace hetcache {

namespace {

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

ValidationCheck check(std::string name, const std::function<std::pair<bool, std::string>()>& body) {
  ValidationCheck c;
  c.name = std::move(name);
  try {
    auto [ok, detail] = body();
    c.passed = ok;
    c.detail = std::move(detail);
  } catch (const std::exception& e) {
    c.passed = false;
    c.detail = std::string("threw: ") + e.what();
  }
  return c;
}

std::string show(double v) { return detail::format_number(v); }

}  // namespace

std::vector<ValidationCheck> run_validation() {
  std::vector<ValidationCheck> out;
  const NetworkConfig cfg = NetworkConfig::reference();
  const Catalog cat(1000, 100, 0.5);

  out.push_back(check("hyp2f1 frozen values", [] {
    // 30-digit reference values, a = -2/3.7 and c = 1 + a.
    const double a = -2.0 / 3.7, c = 1.0 + a;
    struct Case {
      double b, x, expect;
    };
    const Case cases[] = {{4, -0.3, 2.1648640788885216341},
                          {4, -0.9, 3.7500718622373497962},
                          {4, -1e6, 6922.6263168517429207},
                          {1, -2.5, 2.9231738686158527655},
                          {1, -0.01, 1.0117278870750587162}};
    double worst = 0.0;
    for (const Case& k : cases) worst = std::max(worst, rel_err(hyp2f1_neg_arg(a, k.b, c, k.x), k.expect));
    return std::pair{worst < 1e-11, "max relative error " + show(worst)};
  }));

  out.push_back(check("helper coverage in C1..C3 form matches the general form", [&] {
    const CachingPolicy pol = CachingPolicy::popular(cat);
    const double a = helper_success_c123(cfg, cat, pol);
    const double b = success_probability(cfg, cat, pol).success->tier[kHelper];
    return std::pair{rel_err(a, b) < 1e-12, show(a) + " vs " + show(b)};
  }));

  out.push_back(check("water-filling KKT residual", [&] {
    const SolverReport r = maximize_tier2_association(cfg, cat);
    WaterfillSpec spec;
    spec.weights.assign(cat.popularity().begin(), cat.popularity().end());
    const double d = cfg.delta();
    spec.offset = cfg.lambda_macro / cfg.lambda_helper *
                  std::pow(cfg.power_macro * cfg.bias_macro / (cfg.power_helper * cfg.bias_helper), d);
    spec.gain = spec.offset;
    spec.budget = static_cast<double>(cat.cache_size());
    const double res = waterfill_kkt_residual(spec, r.policy.values(), r.multiplier);
    return std::pair{res < 1e-9 && std::abs(r.policy.sum() - spec.budget) < 1e-9, "residual " + show(res)};
  }));

  out.push_back(check("lower bound does not exceed exact helper coverage", [&] {
    const SolverReport r = maximize_success_lower_bound(cfg, cat);
    const double lb = success_lower_bound(cfg, cat, r.policy).success->tier[kHelper];
    const double exact = success_probability(cfg, cat, r.policy).success->tier[kHelper];
    return std::pair{lb <= exact * (1.0 + 1e-12), show(lb) + " <= " + show(exact)};
  }));

  out.push_back(check("tabulated ASE matches adaptive quadrature", [&] {
    const CachingPolicy pol = CachingPolicy::uniform(cat);
    const RateTable table(cfg);
    const double a = *ase_tabulated(table, cfg, cat, pol).ase;
    const double b = *ase_quadrature(cfg, cat, pol).ase;
    return std::pair{rel_err(a, b) < 1e-8, "relative gap " + show(rel_err(a, b))};
  }));

  out.push_back(check("unlimited backhaul equals caching every file", [&] {
    NetworkConfig c = cfg;
    c.bias_helper = c.bias_macro;
    const double trad = *traditional_ase_quadrature(c, TraditionalConfig{1e12}).ase;
    const double full = *ase_quadrature(c, cat, CachingPolicy::everything(cat.size())).ase;
    return std::pair{rel_err(trad, full) < 1e-6, "relative gap " + show(rel_err(trad, full))};
  }));

  out.push_back(check("simulator snapshots are reproducible", [&] {
    SimOptions opt;
    opt.region.side = 1000.0;
    opt.snapshots = 2;
    opt.seed = 7;
    const CachingPolicy pol = CachingPolicy::uniform(cat);
    std::ostringstream a, b;
    write_snapshot(a, simulate_snapshot(cfg, cat, pol, opt, 1));
    write_snapshot(b, simulate_snapshot(cfg, cat, pol, opt, 1));
    return std::pair{a.str() == b.str() && !a.str().empty(), std::to_string(a.str().size()) + " bytes"};
  }));

  out.push_back(check("CSV round trip", [] {
    ResultTable t;
    t.rows.push_back({0.1, "popular", "ase", Method::Simulation, 1.0 / 3.0, 2e-17, "ok"});
    t.rows.push_back({2e6, "traditional:1e+07|zipf_skew=1", "success", Method::Analytic,
                      std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(),
                      "failed"});
    std::stringstream ss;
    write_csv(t, ss);
    const ResultTable back = read_csv(ss);
    bool same = back.rows.size() == t.rows.size();
    for (std::size_t i = 0; same && i < t.rows.size(); ++i) {
      const ResultRow &x = t.rows[i], &y = back.rows[i];
      const auto eq = [](double p, double q) { return p == q || (std::isnan(p) && std::isnan(q)); };
      same = eq(x.sweep, y.sweep) && x.policy == y.policy && x.metric == y.metric && x.method == y.method &&
             eq(x.value, y.value) && eq(x.ci, y.ci) && x.status == y.status;
    }
    return std::pair{same, std::to_string(back.rows.size()) + " rows"};
  }));

  return out;
}

}  // namespace hetcache
