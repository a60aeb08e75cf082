#pragma once

#include <string>

#include "hetcache/harness.hpp"

namespace hetcache::detail {

/// Configuration of one sweep point before the catalog is built.
struct Scenario {
  NetworkConfig cfg;
  std::size_t n_files = 0;
  std::size_t cache_size = 0;
  double zipf_skew = 0.0;
};

bool is_sweep_variable(const std::string& name);
/// Throws ConfigError for unknown names or out-of-range values.
void apply_variable(Scenario& s, const std::string& name, double value);

/// Whether a (policy, metric, method) triple is part of the cell grid.
bool defined(PolicyKind policy, Metric metric, Method method);

std::string format_number(double v);

}  // namespace hetcache::detail
