#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

#include "hetcache/errors.hpp"
#include "hetcache/rate_table.hpp"
#include "internal.hpp"

namespace hetcache {

namespace {

constexpr int kOrder = 8;
constexpr int kGradedPanels = 20;

struct Panel {
  double a, b;
};

std::vector<Panel> panels(double upper) {
  std::vector<Panel> out;
  double hi = std::min(1.0, upper);
  double lo = hi / 4.0;
  std::vector<Panel> graded;
  for (int i = 0; i < kGradedPanels; ++i, hi = lo, lo /= 4.0) graded.push_back({lo, hi});
  graded.push_back({0.0, hi});
  out.assign(graded.rbegin(), graded.rend());
  for (double a = 1.0; a < upper; a += 1.0) out.push_back({a, std::min(a + 1.0, upper)});
  return out;
}

}  // namespace

RateTable::RateTable(const NetworkConfig& cfg, std::array<double, kTiers> upper) {
  cfg.validate();
  const detail::Geometry g(cfg);
  using rule = boost::math::quadrature::gauss<double, kOrder>;
  const auto& xs = rule::abscissa();
  const auto& ws = rule::weights();

  for (std::size_t k = 0; k < kTiers; ++k) {
    if (cfg.density(k) <= 0.0 || (k == kHelper && !detail::helpers_present(cfg))) continue;
    // Smallest denominator over the corners of (q, pa) decides where the tail ends.
    auto worst = [&](double x) {
      const detail::Denominator d = detail::denominator(g, k, std::expm1(x));
      double m = d.at(0.0, 0.0);
      for (double q : {0.0, 1.0})
        for (double pa : {0.0, 1.0}) m = std::min(m, d.at(q, pa));
      return 1.0 / m;
    };
    double tail = 8.0;
    while (tail < 640.0 && worst(tail) >= 1e-12) tail *= 2.0;
    const double end = std::min(tail, upper[k]);
    if (!(end > 0.0)) continue;

    Tier& tt = tier_[k];
    auto add = [&](double x, double w) {
      const detail::Denominator d = detail::denominator(g, k, std::expm1(x));
      tt.weight.push_back(w);
      tt.t.push_back(d.t);
      tt.u.push_back(d.u);
      tt.v.push_back(d.v);
      tt.w = d.w;
    };
    for (const Panel& p : panels(end)) {
      const double mid = 0.5 * (p.a + p.b), half = 0.5 * (p.b - p.a);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        add(mid + half * xs[i], half * ws[i]);
        add(mid - half * xs[i], half * ws[i]);
      }
    }
  }
}

double RateTable::integral(std::size_t k, double q, double pa) const {
  const Tier& t = tier_[k];
  const double qw = q * t.w;
  double acc = 0.0;
  for (std::size_t i = 0; i < t.weight.size(); ++i)
    acc += t.weight[i] / (t.t[i] + qw + pa * (t.u[i] + q * t.v[i]));
  return acc;
}

std::pair<double, double> RateTable::integral_and_slope(std::size_t k, double q, double pa) const {
  const Tier& t = tier_[k];
  double acc = 0.0, slope = 0.0;
  for (std::size_t i = 0; i < t.weight.size(); ++i) {
    const double inv = 1.0 / (t.t[i] + q * t.w + pa * (t.u[i] + q * t.v[i]));
    acc += t.weight[i] * inv;
    slope -= t.weight[i] * (pa * t.v[i] + t.w) * inv * inv;
  }
  return {acc, slope};
}

EvalReport ase_tabulated(const RateTable& table, const NetworkConfig& cfg, const Catalog& catalog,
                         const CachingPolicy& policy) {
  const AssociationReport a = association(cfg, catalog, policy);
  const LoadReport load = load_report(cfg, a.tier[kHelper]);
  const double pa = load.active[kHelper];
  EvalReport r;
  r.method = Method::Analytic;
  for (std::size_t k = 0; k < kTiers; ++k) {
    if (a.tier[k] <= 0.0 || table.nodes(k) == 0) continue;
    double acc = 0.0;
    for (std::size_t f = 0; f < catalog.size(); ++f) {
      const double q = policy[f];
      const double weight = k == kMacro ? 1.0 : q;
      if (weight > 0.0) acc += catalog.popularity(f) * weight * table.integral(k, q, pa);
    }
    r.ase_tier[k] = cfg.density(k) * load.active[k] * cfg.antennas(k) / a.tier[k] * acc;
  }
  r.ase = r.ase_tier[kMacro] + r.ase_tier[kHelper];
  if (!std::isfinite(*r.ase))
    throw NumericFailure("ASE is not finite", std::vector<double>(policy.values().begin(), policy.values().end()));
  return r;
}

}  // namespace hetcache
