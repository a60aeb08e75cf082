#include "hetcache/analytics.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "hetcache/errors.hpp"
#include "internal.hpp"

namespace hetcache {

namespace detail {

Geometry::Geometry(const NetworkConfig& cfg) : delta(cfg.delta()) {
  for (std::size_t j = 0; j < kTiers; ++j) {
    for (std::size_t k = 0; k < kTiers; ++k) {
      lam[j][k] = cfg.density(j) / cfg.density(k);
      pw[j][k] = std::pow(cfg.power(j) / cfg.power(k), delta);
      bs[j][k] = std::pow(cfg.bias(j) / cfg.bias(k), delta);
      kp[j][k] = kernel_params(cfg, j, k);
    }
  }
}

Denominator denominator(const Geometry& g, std::size_t k, double x) {
  Denominator d;
  const double m = g.lam[kMacro][k] * g.pw[kMacro][k];
  d.t = m * g.bs[kMacro][k] * (kernel_z1(x, g.kp[kMacro][k]) + 1.0);
  const double h = g.lam[kHelper][k] * g.pw[kHelper][k];
  if (h > 0.0) {
    const double z1 = kernel_z1(x, g.kp[kHelper][k]);
    const double z2 = kernel_z2(x, g.kp[kHelper][k]);
    d.u = h * z2;
    d.v = h * (g.bs[kHelper][k] * z1 - z2);
    d.w = h * g.bs[kHelper][k];
  }
  return d;
}

double rate_threshold(double rate, double bandwidth, double antennas, double mean_load) {
  return std::expm1(std::numbers::ln2 * rate / (bandwidth * antennas) * mean_load);
}

bool helpers_present(const NetworkConfig& cfg) { return cfg.lambda_helper > 0.0 && cfg.bias_helper > 0.0; }

double helper_active_probability(const NetworkConfig& cfg, double helper_association) {
  if (!helpers_present(cfg) || cfg.lambda_user == 0.0) return 0.0;
  const double ratio = helper_association * cfg.lambda_user / (3.5 * cfg.lambda_helper);
  return -std::expm1(-3.5 * std::log1p(ratio));
}

double association_offset(const NetworkConfig& cfg) {
  if (!helpers_present(cfg)) return std::numeric_limits<double>::infinity();
  return cfg.lambda_macro / cfg.lambda_helper *
         std::pow(cfg.power_macro * cfg.bias_macro / (cfg.power_helper * cfg.bias_helper), cfg.delta());
}

double log1p_over(double y) {
  if (std::abs(y) < 1e-8) return 1.0 - y / 2.0 + y * y / 3.0;
  return std::log1p(y) / y;
}

double log1p_over_slope(double y) {
  if (std::abs(y) < 1e-6) return -0.5 + 2.0 * y / 3.0;
  return (y / (1.0 + y) - std::log1p(y)) / (y * y);
}

double ClosedFormTier::term(double alpha, double q) const {
  const double u = std::pow(4.0, -1.0 / alpha);
  return alpha / (2.0 * k1) * u * log1p_over(k2_per_q * q * u / k1);
}

double ClosedFormTier::term_slope(double alpha, double q) const {
  const double u = std::pow(4.0, -1.0 / alpha);
  const double r = k2_per_q * u / k1;
  return alpha / (2.0 * k1) * u * log1p_over_slope(r * q) * r;
}

ClosedFormTier closed_form_tier(const NetworkConfig& cfg, const Geometry& g, std::size_t k, double pa2) {
  const double d = g.delta;
  ClosedFormTier t;
  for (std::size_t j = 0; j < kTiers; ++j) {
    const double pa = j == kMacro ? 1.0 : pa2;
    const double m = cfg.antennas(j);
    const double mjk = m / cfg.antennas(k);
    t.k1 += g.lam[j][k] * g.pw[j][k] * pa * gamma_ratio({1.0 - d, m + d}, {m}) * std::pow(mjk, -d);
  }
  t.k2_per_q = g.lam[kHelper][k] * g.pw[kHelper][k] * (1.0 - pa2);
  return t;
}

}  // namespace detail

using detail::Denominator;
using detail::Geometry;
using detail::ClosedFormTier;
using detail::closed_form_tier;

namespace {

void check_inputs(const NetworkConfig& cfg, const Catalog& catalog, const CachingPolicy& policy) {
  cfg.validate();
  if (policy.size() != catalog.size()) throw InvalidArgument("policy length differs from catalog size");
}

void require_finite(double v, const char* what, std::span<const double> policy = {}) {
  if (!std::isfinite(v)) throw NumericFailure(what, std::vector<double>(policy.begin(), policy.end()));
}

}  // namespace

double helper_association_given(const NetworkConfig& cfg, double q) {
  if (q <= 0.0) return 0.0;
  const double c = detail::association_offset(cfg);
  if (std::isinf(c)) return 0.0;
  return q / (c + q);
}

AssociationReport association(const NetworkConfig& cfg, const Catalog& catalog, const CachingPolicy& policy) {
  check_inputs(cfg, catalog, policy);
  AssociationReport r;
  r.helper_given_file.resize(catalog.size());
  double p2 = 0.0;
  for (std::size_t f = 0; f < catalog.size(); ++f) {
    r.helper_given_file[f] = helper_association_given(cfg, policy[f]);
    p2 += catalog.popularity(f) * r.helper_given_file[f];
  }
  r.tier[kHelper] = p2;
  r.tier[kMacro] = 1.0 - p2;
  return r;
}

LoadReport load_report(const NetworkConfig& cfg, double helper_association) {
  LoadReport r;
  const std::array<double, kTiers> share{1.0 - helper_association, helper_association};
  r.active[kMacro] = 1.0;
  r.active[kHelper] = detail::helper_active_probability(cfg, helper_association);
  for (std::size_t k = 0; k < kTiers; ++k) {
    const double lam = cfg.density(k);
    r.mean_load[k] = lam > 0.0 ? 1.0 + 1.28 * cfg.lambda_user * share[k] / lam : 1.0;
    r.threshold[k] = detail::rate_threshold(cfg.rate_target, cfg.bandwidth, cfg.antennas(k), r.mean_load[k]);
  }
  return r;
}

LoadReport load_report(const NetworkConfig& cfg, const Catalog& catalog, const CachingPolicy& policy) {
  return load_report(cfg, association(cfg, catalog, policy).tier[kHelper]);
}

std::string to_string(Method m) {
  switch (m) {
    case Method::Analytic: return "analytic";
    case Method::LowerBound: return "lower_bound";
    case Method::ClosedForm: return "closed_form";
    case Method::Simulation: return "simulation";
  }
  return "unknown";
}

double EvalReport::ase_bits() const {
  if (!ase) throw InvalidArgument("report carries no ASE value");
  return nats_to_bits(*ase);
}

SuccessBreakdown success_at_association(const NetworkConfig& cfg, const Catalog& catalog,
                                        const CachingPolicy& policy, double helper_association,
                                        std::optional<double> helper_active) {
  const LoadReport load = load_report(cfg, helper_association);
  const double pa = helper_active.value_or(load.active[kHelper]);
  const Geometry g(cfg);
  const bool helpers = detail::helpers_present(cfg);
  const Denominator dm = denominator(g, kMacro, load.threshold[kMacro]);
  Denominator dh;
  if (helpers) dh = denominator(g, kHelper, load.threshold[kHelper]);

  SuccessBreakdown s;
  double macro = 0.0, helper = 0.0;
  for (std::size_t f = 0; f < catalog.size(); ++f) {
    const double p = catalog.popularity(f);
    const double q = policy[f];
    macro += p / dm.at(q, pa);
    if (helpers && q > 0.0) helper += p * q / dh.at(q, pa);
  }
  s.tier = {macro, helper};
  s.total = macro + helper;
  require_finite(s.total, "coverage probability is not finite", policy.values());
  return s;
}

EvalReport success_probability(const NetworkConfig& cfg, const Catalog& catalog, const CachingPolicy& policy,
                               const SuccessOptions& opts) {
  const AssociationReport a = association(cfg, catalog, policy);
  if (opts.helper_active && !(*opts.helper_active >= 0.0 && *opts.helper_active <= 1.0))
    throw InvalidArgument("helper active probability must lie in [0, 1]");
  EvalReport r;
  r.method = Method::Analytic;
  r.success = success_at_association(cfg, catalog, policy, a.tier[kHelper], opts.helper_active);
  for (auto& w : cfg.warnings()) r.warnings.push_back(w);
  return r;
}

double helper_success_c123(const NetworkConfig& cfg, const Catalog& catalog, const CachingPolicy& policy) {
  const AssociationReport a = association(cfg, catalog, policy);
  if (!detail::helpers_present(cfg)) return 0.0;
  const LoadReport load = load_report(cfg, a.tier[kHelper]);
  const C123 c = kernels_c123(load.threshold[kHelper], cfg);
  const double pa = load.active[kHelper];
  double s = 0.0;
  for (std::size_t f = 0; f < catalog.size(); ++f) {
    const double q = policy[f];
    if (q > 0.0) s += catalog.popularity(f) * q / (c.c1 + c.c2 * pa + c.c3 * pa * q + q);
  }
  return s;
}

BoundConstants bound_constants(const NetworkConfig& cfg, double helper_association_bound) {
  if (!detail::helpers_present(cfg)) throw InvalidArgument("bound needs a helper tier with positive bias");
  BoundConstants b;
  const LoadReport load = load_report(cfg, helper_association_bound);
  b.threshold = load.threshold[kHelper];
  b.active = load.active[kHelper];
  b.c = kernels_c123(b.threshold, cfg);
  return b;
}

EvalReport success_lower_bound(const NetworkConfig& cfg, const Catalog& catalog, const CachingPolicy& policy,
                               double helper_association_bound) {
  check_inputs(cfg, catalog, policy);
  const BoundConstants b = bound_constants(cfg, helper_association_bound);
  const double c1 = b.c.c1 + b.active * b.c.c2;
  const double c2 = b.active * b.c.c3 + 1.0;
  double s = 0.0;
  for (std::size_t f = 0; f < catalog.size(); ++f) {
    const double q = policy[f];
    if (q > 0.0) s += catalog.popularity(f) * q / (c1 + c2 * q);
  }
  require_finite(s, "coverage bound is not finite", policy.values());
  EvalReport r;
  r.method = Method::LowerBound;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.success = SuccessBreakdown{nan, {nan, s}};
  return r;
}

namespace {

constexpr double kTailLevel = 1e-12;

// Upper end of the rate integral: the first doubling point where the
// integrand has dropped below kTailLevel.
template <class F>
double tail_point(F&& integrand) {
  double x = 8.0;
  while (x < 640.0 && integrand(x) >= kTailLevel) x *= 2.0;
  return x;
}

// The integrand behaves like 1 - c x^(2/alpha) at the origin, so [0, 1] uses
// tanh-sinh, which tolerates the endpoint cusp; the smooth tail uses
// Gauss-Kronrod.
template <class F>
double integrate(F&& f, double upper) {
  using boost::math::quadrature::gauss_kronrod;
  thread_local boost::math::quadrature::tanh_sinh<double> near_zero(15);
  double total = 0.0, err = 0.0;
  const double knee = std::min(1.0, upper);
  if (knee > 0.0) {
    total = near_zero.integrate(f, 0.0, knee, 1e-12, &err);
    if (!std::isfinite(total) || err > 5e-11) throw NumericFailure("rate integral did not reach the requested tolerance");
  }
  if (upper > 1.0) {
    const double v = gauss_kronrod<double, 31>::integrate(f, 1.0, upper, 15, 1e-12, &err);
    if (!std::isfinite(v) || err > 5e-11) throw NumericFailure("rate integral did not reach the requested tolerance");
    total += v;
  }
  return total;
}

struct RateIntegral {
  const Geometry& g;
  std::size_t k;
  double pa;

  double operator()(double q, double upper) const {
    auto f = [&](double x) { return 1.0 / denominator(g, k, std::expm1(x)).at(q, pa); };
    const double tail = tail_point(f);
    return integrate(f, std::min(upper, tail));
  }
};

// Shared by the cached and traditional variants: per-tier rate integral upper ends.
EvalReport ase_quadrature_impl(const NetworkConfig& cfg, const Catalog& catalog, const CachingPolicy& policy,
                               std::array<double, kTiers> upper) {
  const AssociationReport a = association(cfg, catalog, policy);
  const LoadReport load = load_report(cfg, a.tier[kHelper]);
  const Geometry g(cfg);
  const double pa = load.active[kHelper];

  EvalReport r;
  r.method = Method::Analytic;
  for (std::size_t k = 0; k < kTiers; ++k) {
    if (a.tier[k] <= 0.0 || cfg.density(k) <= 0.0) continue;
    if (k == kHelper && !detail::helpers_present(cfg)) continue;
    RateIntegral integral{g, k, pa};
    std::map<double, double> memo;
    double acc = 0.0;
    for (std::size_t f = 0; f < catalog.size(); ++f) {
      const double q = policy[f];
      const double weight = k == kMacro ? 1.0 : q;
      if (weight <= 0.0) continue;
      auto it = memo.find(q);
      if (it == memo.end()) it = memo.emplace(q, integral(q, upper[k])).first;
      acc += catalog.popularity(f) * weight * it->second;
    }
    r.ase_tier[k] = cfg.density(k) * load.active[k] * cfg.antennas(k) / a.tier[k] * acc;
  }
  r.ase = r.ase_tier[kMacro] + r.ase_tier[kHelper];
  require_finite(*r.ase, "ASE is not finite", policy.values());
  return r;
}

void require_equal_bias(const NetworkConfig& cfg) {
  const double b1 = cfg.bias_macro, b2 = cfg.bias_helper;
  if (std::abs(b1 - b2) > 1e-12 * std::max(b1, b2))
    throw UnsupportedConfiguration("closed-form ASE assumes equal association biases");
}

}  // namespace

EvalReport ase_quadrature(const NetworkConfig& cfg, const Catalog& catalog, const CachingPolicy& policy) {
  const double inf = std::numeric_limits<double>::infinity();
  return ase_quadrature_impl(cfg, catalog, policy, {inf, inf});
}

EvalReport ase_closed_form(const NetworkConfig& cfg, const Catalog& catalog, const CachingPolicy& policy) {
  check_inputs(cfg, catalog, policy);
  require_equal_bias(cfg);
  const AssociationReport a = association(cfg, catalog, policy);
  const LoadReport load = load_report(cfg, a.tier[kHelper]);
  const Geometry g(cfg);
  const double pa2 = load.active[kHelper];

  EvalReport r;
  r.method = Method::ClosedForm;
  for (std::size_t k = 0; k < kTiers; ++k) {
    if (a.tier[k] <= 0.0 || cfg.density(k) <= 0.0) continue;
    const ClosedFormTier t = closed_form_tier(cfg, g, k, pa2);
    double acc = 0.0;
    for (std::size_t f = 0; f < catalog.size(); ++f) {
      const double q = policy[f];
      const double weight = k == kMacro ? 1.0 : q;
      if (weight > 0.0) acc += catalog.popularity(f) * weight * t.term(cfg.alpha, q);
    }
    r.ase_tier[k] =
        load.active[k] * cfg.density(k) * cfg.antennas(k) * (std::numbers::ln2 + acc / a.tier[k]);
  }
  r.ase = r.ase_tier[kMacro] + r.ase_tier[kHelper];
  require_finite(*r.ase, "ASE is not finite", policy.values());
  return r;
}

namespace {

double backhaul_limit(const NetworkConfig& cfg, const TraditionalConfig& trad) {
  if (!std::isfinite(trad.backhaul_capacity) || trad.backhaul_capacity < 0.0)
    throw InvalidArgument("backhaul capacity must be finite and >= 0");
  return bits_to_nats(trad.backhaul_capacity) / cfg.bandwidth;
}

}  // namespace

EvalReport traditional_ase_quadrature(const NetworkConfig& cfg, const TraditionalConfig& trad) {
  cfg.validate();
  const double limit = backhaul_limit(cfg, trad);
  const Catalog single(1, 1, 0.0);
  return ase_quadrature_impl(cfg, single, CachingPolicy::everything(1),
                             {std::numeric_limits<double>::infinity(), limit});
}

EvalReport traditional_ase_closed_form(const NetworkConfig& cfg, const TraditionalConfig& trad) {
  cfg.validate();
  require_equal_bias(cfg);
  const double limit = backhaul_limit(cfg, trad);
  const Catalog single(1, 1, 0.0);
  const AssociationReport a = association(cfg, single, CachingPolicy::everything(1));
  const LoadReport load = load_report(cfg, a.tier[kHelper]);
  const Geometry g(cfg);
  const ClosedFormTier t = closed_form_tier(cfg, g, kMacro, load.active[kHelper]);

  EvalReport r;
  r.method = Method::ClosedForm;
  r.ase_tier[kMacro] =
      cfg.density(kMacro) * cfg.antennas(kMacro) * (std::numbers::ln2 + t.term(cfg.alpha, 1.0) / a.tier[kMacro]);
  r.ase_tier[kHelper] = cfg.lambda_helper * load.active[kHelper] * limit;
  r.ase = r.ase_tier[kMacro] + r.ase_tier[kHelper];
  if (limit > std::numbers::ln2)
    r.warnings.emplace_back("backhaul exceeds the bandwidth; the capped small-cell term is optimistic");
  return r;
}

}  // namespace hetcache
