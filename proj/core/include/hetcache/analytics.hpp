#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hetcache/model.hpp"
#include "hetcache/specfun.hpp"

namespace hetcache {

struct AssociationReport {
  std::array<double, kTiers> tier{};  ///< probability that a typical user is served by tier k
  std::vector<double> helper_given_file;  ///< P(helper tier | request f); macro is the complement

  double given_file(std::size_t f, std::size_t k) const {
    return k == kHelper ? helper_given_file[f] : 1.0 - helper_given_file[f];
  }
};

AssociationReport association(const NetworkConfig& cfg, const Catalog& catalog,
                              const CachingPolicy& policy);

/// Helper-tier association with file f cached with probability q.
double helper_association_given(const NetworkConfig& cfg, double q);

struct LoadReport {
  std::array<double, kTiers> active{};     ///< probability a station has at least one user
  std::array<double, kTiers> mean_load{};  ///< mean users at the tagged station
  std::array<double, kTiers> threshold{};  ///< SINR threshold that meets the rate target
};

LoadReport load_report(const NetworkConfig& cfg, double helper_association);
LoadReport load_report(const NetworkConfig& cfg, const Catalog& catalog, const CachingPolicy& policy);

enum class Method { Analytic, LowerBound, ClosedForm, Simulation };
std::string to_string(Method m);

struct SuccessBreakdown {
  double total = 0.0;
  std::array<double, kTiers> tier{};
};

struct EvalReport {
  Method method = Method::Analytic;
  std::optional<SuccessBreakdown> success;
  std::optional<double> ase;            ///< nat/s/Hz/m^2
  std::array<double, kTiers> ase_tier{};
  std::vector<std::string> warnings;

  double ase_bits() const;              ///< bit/s/Hz/m^2
};

struct SuccessOptions {
  /// Replaces the load-derived helper active probability when set.
  std::optional<double> helper_active;
};

/// Rate-coverage probability of a typical user, per tier and in total.
EvalReport success_probability(const NetworkConfig& cfg, const Catalog& catalog,
                               const CachingPolicy& policy, const SuccessOptions& opts = {});

/// Same quantity with the helper association share supplied by the caller,
/// so loads and thresholds can be perturbed independently of the policy.
SuccessBreakdown success_at_association(const NetworkConfig& cfg, const Catalog& catalog,
                                        const CachingPolicy& policy, double helper_association,
                                        std::optional<double> helper_active = std::nullopt);

/// Helper-tier coverage written with the C1..C3 constants; equals the helper
/// component of success_probability.
double helper_success_c123(const NetworkConfig& cfg, const Catalog& catalog, const CachingPolicy& policy);

/// Threshold, active probability and C1..C3 obtained by replacing the helper
/// association with an upper bound on it.
struct BoundConstants {
  double threshold = 0.0;
  double active = 0.0;
  C123 c;
};
BoundConstants bound_constants(const NetworkConfig& cfg, double helper_association_bound);

/// Lower bound on helper-tier coverage; only success->tier[kHelper] is set,
/// total and macro entries are NaN.
EvalReport success_lower_bound(const NetworkConfig& cfg, const Catalog& catalog,
                               const CachingPolicy& policy, double helper_association_bound);

/// Area spectral efficiency by adaptive quadrature of the per-file rate
/// integrals. Absolute tolerance 1e-10 per integral.
EvalReport ase_quadrature(const NetworkConfig& cfg, const Catalog& catalog, const CachingPolicy& policy);

/// High-SINR/low-SINR split approximation. Requires equal biases.
EvalReport ase_closed_form(const NetworkConfig& cfg, const Catalog& catalog, const CachingPolicy& policy);

/// Baseline without caches: helpers hold every file but each small-cell rate
/// integral stops at the backhaul capacity.
EvalReport traditional_ase_quadrature(const NetworkConfig& cfg, const TraditionalConfig& trad);
EvalReport traditional_ase_closed_form(const NetworkConfig& cfg, const TraditionalConfig& trad);

}  // namespace hetcache
