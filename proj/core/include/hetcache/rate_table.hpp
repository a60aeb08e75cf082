#pragma once

#include <array>
#include <limits>
#include <vector>

#include "hetcache/analytics.hpp"

namespace hetcache {

/**
 * Fixed-node version of the per-file rate integrals behind the ASE. The
 * interference kernels are tabulated once per configuration; afterwards an
 * integral for any (q, pa) pair costs one pass over the nodes. Nodes are
 * Gauss-Legendre on geometrically graded panels near zero and unit panels
 * beyond, which matches the adaptive quadrature to about 1e-9 relative.
 */
class RateTable {
 public:
  explicit RateTable(const NetworkConfig& cfg,
                     std::array<double, kTiers> upper = {std::numeric_limits<double>::infinity(),
                                                         std::numeric_limits<double>::infinity()});

  double integral(std::size_t k, double q, double pa) const;
  /// Integral and its derivative with respect to q.
  std::pair<double, double> integral_and_slope(std::size_t k, double q, double pa) const;
  std::size_t nodes(std::size_t k) const { return tier_[k].weight.size(); }

 private:
  struct Tier {
    std::vector<double> weight, t, u, v;
    double w = 0.0;
  };
  std::array<Tier, kTiers> tier_;
};

/// ASE evaluated with a prebuilt table; the configuration must match the table's.
EvalReport ase_tabulated(const RateTable& table, const NetworkConfig& cfg, const Catalog& catalog,
                         const CachingPolicy& policy);

}  // namespace hetcache
