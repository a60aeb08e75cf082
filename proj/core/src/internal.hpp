#pragma once

#include <array>
#include <cmath>

#include "hetcache/model.hpp"
#include "hetcache/specfun.hpp"

namespace hetcache::detail {

/// Pairwise tier ratios raised to the powers that appear in the coverage
/// expressions. Index order is [interfering tier j][serving tier k].
struct Geometry {
  double delta = 0.0;
  double lam[kTiers][kTiers]{};
  double pw[kTiers][kTiers]{};
  double bs[kTiers][kTiers]{};
  KernelParams kp[kTiers][kTiers];

  explicit Geometry(const NetworkConfig& cfg);
};

/// Coverage denominator for serving tier k at threshold x, written as an
/// affine function of the helper caching probability q and active probability pa:
/// t + pa*u + q*(pa*v + w).
struct Denominator {
  double t = 0.0, u = 0.0, v = 0.0, w = 0.0;
  double at(double q, double pa) const { return t + pa * u + q * (pa * v + w); }
  double slope(double pa) const { return pa * v + w; }
};

Denominator denominator(const Geometry& g, std::size_t k, double x);

/// Threshold x such that log2(1+x) equals the per-user rate requirement.
double rate_threshold(double rate, double bandwidth, double antennas, double mean_load);

double helper_active_probability(const NetworkConfig& cfg, double helper_association);

/// Whether the configuration has a helper tier that can serve anyone.
bool helpers_present(const NetworkConfig& cfg);

/// Scale factor c with P(helper | q) = q / (c + q).
double association_offset(const NetworkConfig& cfg);

/// log(1 + y) / y and its derivative, with the removable singularity at 0.
double log1p_over(double y);
double log1p_over_slope(double y);

/// Constants of the closed-form ASE for serving tier k: the interference
/// term K1 and the idle-helper term K2 = k2_per_q * q.
struct ClosedFormTier {
  double k1 = 0.0;
  double k2_per_q = 0.0;

  /// alpha/(2 K2) log(1 + K2/K1 4^{-1/alpha}) and its q-derivative.
  double term(double alpha, double q) const;
  double term_slope(double alpha, double q) const;
};

ClosedFormTier closed_form_tier(const NetworkConfig& cfg, const Geometry& g, std::size_t k, double pa2);

}  // namespace hetcache::detail
