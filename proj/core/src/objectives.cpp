#include <cmath>
#include <numbers>

#include "hetcache/errors.hpp"
#include "hetcache/optimizers.hpp"
#include "internal.hpp"

namespace hetcache {

namespace {

double helper_share(std::span<const double> p, std::span<const double> q, double c) {
  double s = 0.0;
  for (std::size_t f = 0; f < q.size(); ++f)
    if (q[f] != 0.0) s += p[f] * q[f] / (c + q[f]);
  return s;
}

void check_size(std::span<const double> q, const Catalog& catalog) {
  if (q.size() != catalog.size()) throw InvalidArgument("policy length differs from catalog size");
}

void require_helpers(const NetworkConfig& cfg) {
  cfg.validate();
  if (!detail::helpers_present(cfg)) throw InvalidArgument("objective needs a helper tier");
}

// Adds (d value / d share) * (d share / d q_f) to a gradient computed at a
// fixed helper share. The first factor is a central difference on the scalar.
template <class F>
void add_share_coupling(F&& value_at, double share, std::span<const double> p, std::span<const double> q, double c,
                        std::span<double> grad) {
  const double h = 1e-6;
  const double lo = std::max(0.0, share - h), hi = std::min(1.0, share + h);
  const double d = (value_at(hi) - value_at(lo)) / (hi - lo);
  for (std::size_t f = 0; f < q.size(); ++f) grad[f] += d * p[f] * c / ((c + q[f]) * (c + q[f]));
}

}  // namespace

CoverageObjective::CoverageObjective(NetworkConfig cfg, Catalog catalog)
    : cfg_(std::move(cfg)), catalog_(std::move(catalog)) {
  require_helpers(cfg_);
  offset_ = detail::association_offset(cfg_);
}

namespace {

struct CoverageTerms {
  detail::Denominator macro, helper;
  double pa = 0.0;
};

CoverageTerms coverage_terms(const NetworkConfig& cfg, double share) {
  const detail::Geometry g(cfg);
  const LoadReport load = load_report(cfg, share);
  return {detail::denominator(g, kMacro, load.threshold[kMacro]),
          detail::denominator(g, kHelper, load.threshold[kHelper]), load.active[kHelper]};
}

double coverage_value(const CoverageTerms& t, std::span<const double> p, std::span<const double> q) {
  double s = 0.0;
  for (std::size_t f = 0; f < q.size(); ++f) {
    s += p[f] / t.macro.at(q[f], t.pa);
    if (q[f] != 0.0) s += p[f] * q[f] / t.helper.at(q[f], t.pa);
  }
  return s;
}

}  // namespace

double CoverageObjective::value(std::span<const double> q) const {
  check_size(q, catalog_);
  const auto p = catalog_.popularity();
  return coverage_value(coverage_terms(cfg_, helper_share(p, q, offset_)), p, q);
}

void CoverageObjective::gradient(std::span<const double> q, std::span<double> grad) const {
  check_size(q, catalog_);
  const auto p = catalog_.popularity();
  const double share = helper_share(p, q, offset_);
  const CoverageTerms t = coverage_terms(cfg_, share);
  for (std::size_t f = 0; f < q.size(); ++f) {
    const double dm = t.macro.at(q[f], t.pa), dh = t.helper.at(q[f], t.pa);
    grad[f] = p[f] * (-t.macro.slope(t.pa) / (dm * dm) + (t.helper.t + t.pa * t.helper.u) / (dh * dh));
  }
  add_share_coupling([&](double s) { return coverage_value(coverage_terms(cfg_, s), p, q); }, share, p, q, offset_,
                     grad);
}

AseObjective::AseObjective(NetworkConfig cfg, Catalog catalog)
    : cfg_(std::move(cfg)), catalog_(std::move(catalog)) {
  require_helpers(cfg_);
  offset_ = detail::association_offset(cfg_);
  table_ = std::make_shared<const RateTable>(cfg_);
}

// Reported in units of the macro density so that values are O(1).
double AseObjective::value_at(std::span<const double> q, double share) const {
  const auto p = catalog_.popularity();
  const double pa = detail::helper_active_probability(cfg_, share);
  double macro = 0.0, helper = 0.0;
  for (std::size_t f = 0; f < q.size(); ++f) {
    macro += p[f] * table_->integral(kMacro, q[f], pa);
    if (q[f] != 0.0) helper += p[f] * q[f] * table_->integral(kHelper, q[f], pa);
  }
  double v = cfg_.antennas_macro * macro / (1.0 - share);
  if (share > 0.0) v += cfg_.lambda_helper / cfg_.lambda_macro * pa * helper / share;
  return v;
}

double AseObjective::value(std::span<const double> q) const {
  check_size(q, catalog_);
  return value_at(q, helper_share(catalog_.popularity(), q, offset_));
}

void AseObjective::gradient(std::span<const double> q, std::span<double> grad) const {
  check_size(q, catalog_);
  const auto p = catalog_.popularity();
  const double share = helper_share(p, q, offset_);
  const double pa = detail::helper_active_probability(cfg_, share);
  const double macro_scale = cfg_.antennas_macro / (1.0 - share);
  const double helper_scale = share > 0.0 ? cfg_.lambda_helper / cfg_.lambda_macro * pa / share : 0.0;
  for (std::size_t f = 0; f < q.size(); ++f) {
    const auto [im, sm] = table_->integral_and_slope(kMacro, q[f], pa);
    const auto [ih, sh] = table_->integral_and_slope(kHelper, q[f], pa);
    (void)im;
    grad[f] = p[f] * (macro_scale * sm + helper_scale * (ih + q[f] * sh));
  }
  if (share > 0.0)
    add_share_coupling([&](double s) { return value_at(q, s); }, share, p, q, offset_, grad);
  else
    fd_gradient(q, grad);
}

AseClosedFormObjective::AseClosedFormObjective(NetworkConfig cfg, Catalog catalog)
    : cfg_(std::move(cfg)), catalog_(std::move(catalog)) {
  require_helpers(cfg_);
  if (std::abs(cfg_.bias_macro - cfg_.bias_helper) > 1e-12 * std::max(cfg_.bias_macro, cfg_.bias_helper))
    throw UnsupportedConfiguration("closed-form ASE assumes equal association biases");
  offset_ = detail::association_offset(cfg_);
}

double AseClosedFormObjective::value_at(std::span<const double> q, double share) const {
  const auto p = catalog_.popularity();
  const detail::Geometry g(cfg_);
  const double pa = detail::helper_active_probability(cfg_, share);
  const auto tm = detail::closed_form_tier(cfg_, g, kMacro, pa);
  const auto th = detail::closed_form_tier(cfg_, g, kHelper, pa);
  double macro = 0.0, helper = 0.0;
  for (std::size_t f = 0; f < q.size(); ++f) {
    macro += p[f] * tm.term(cfg_.alpha, q[f]);
    if (q[f] != 0.0) helper += p[f] * q[f] * th.term(cfg_.alpha, q[f]);
  }
  double v = cfg_.antennas_macro * (std::numbers::ln2 + macro / (1.0 - share));
  if (share > 0.0) v += cfg_.lambda_helper / cfg_.lambda_macro * pa * (std::numbers::ln2 + helper / share);
  return v;
}

double AseClosedFormObjective::value(std::span<const double> q) const {
  check_size(q, catalog_);
  return value_at(q, helper_share(catalog_.popularity(), q, offset_));
}

void AseClosedFormObjective::gradient(std::span<const double> q, std::span<double> grad) const {
  check_size(q, catalog_);
  const auto p = catalog_.popularity();
  const double share = helper_share(p, q, offset_);
  if (!(share > 0.0)) {
    fd_gradient(q, grad);
    return;
  }
  const detail::Geometry g(cfg_);
  const double pa = detail::helper_active_probability(cfg_, share);
  const auto tm = detail::closed_form_tier(cfg_, g, kMacro, pa);
  const auto th = detail::closed_form_tier(cfg_, g, kHelper, pa);
  const double macro_scale = cfg_.antennas_macro / (1.0 - share);
  const double helper_scale = cfg_.lambda_helper / cfg_.lambda_macro * pa / share;
  const double a = cfg_.alpha;
  for (std::size_t f = 0; f < q.size(); ++f)
    grad[f] = p[f] * (macro_scale * tm.term_slope(a, q[f]) +
                      helper_scale * (th.term(a, q[f]) + q[f] * th.term_slope(a, q[f])));
  add_share_coupling([&](double s) { return value_at(q, s); }, share, p, q, offset_, grad);
}

}  // namespace hetcache
