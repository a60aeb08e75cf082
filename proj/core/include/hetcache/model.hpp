#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace hetcache {

/// Tier 0 is the macro tier (multi-antenna, full catalog reachable through
/// backhaul), tier 1 is the cache-enabled helper tier.
enum class Tier : std::uint8_t { Macro = 0, Helper = 1 };
inline constexpr std::size_t kTiers = 2;
inline constexpr std::size_t kMacro = 0;
inline constexpr std::size_t kHelper = 1;
inline constexpr int kHelperAntennas = 1;

using Rng = std::mt19937_64;

double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);
double bits_to_nats(double bits);
double nats_to_bits(double nats);

/// Density of one point per disk of the given radius, in points per m^2.
double per_disk(double count, double radius_m);

struct NetworkConfig {
  double lambda_macro = 0.0;   ///< m^-2
  double lambda_helper = 0.0;  ///< m^-2
  double lambda_user = 0.0;    ///< m^-2
  double power_macro = 0.0;    ///< W
  double power_helper = 0.0;   ///< W
  int antennas_macro = 1;
  double bias_macro = 1.0;
  double bias_helper = 1.0;
  double alpha = 4.0;
  double bandwidth = 1.0;      ///< Hz
  double rate_target = 1.0;    ///< bit/s
  double noise_power = 0.0;    ///< W, used by the simulator only

  /// 46/21 dBm powers, 4 macro antennas, helper bias 10, alpha 3.7, 20 MHz,
  /// 2 Mbit/s target, one macro per 250 m disk and 50 helpers and users per disk.
  static NetworkConfig reference();

  double density(std::size_t tier) const { return tier == kMacro ? lambda_macro : lambda_helper; }
  double power(std::size_t tier) const { return tier == kMacro ? power_macro : power_helper; }
  int antennas(std::size_t tier) const { return tier == kMacro ? antennas_macro : kHelperAntennas; }
  double bias(std::size_t tier) const { return tier == kMacro ? bias_macro : bias_helper; }
  double delta() const { return 2.0 / alpha; }

  /// Throws InvalidArgument on out-of-domain values.
  void validate() const;
  /// Non-fatal advisories (for example fewer users than macro cells).
  std::vector<std::string> warnings() const;
};

/// File catalog with Zipf popularity. Files are indexed 0..n-1 in decreasing
/// popularity, so index f corresponds to popularity rank f+1.
class Catalog {
 public:
  Catalog(std::size_t n_files, std::size_t cache_size, double zipf_skew);

  std::size_t size() const { return popularity_.size(); }
  std::size_t cache_size() const { return cache_size_; }
  double zipf_skew() const { return skew_; }
  std::span<const double> popularity() const { return popularity_; }
  double popularity(std::size_t f) const { return popularity_[f]; }

  /// Draws a file index with probability popularity(f).
  std::size_t sample_request(Rng& rng) const;
  std::size_t request_from_uniform(double u) const;

 private:
  std::size_t cache_size_;
  double skew_;
  std::vector<double> popularity_;
  std::vector<double> cdf_;
};

std::vector<double> zipf_popularity(std::size_t n_files, double skew);

/// Per-file helper caching probabilities. The macro tier implicitly holds
/// every file (q = 1), so only the helper column is stored.
class CachingPolicy {
 public:
  CachingPolicy() = default;
  /// Validates box constraints and the budget sum(q) <= budget with a 1e-9
  /// tolerance; entries within the tolerance of the box are clipped.
  CachingPolicy(std::vector<double> q, double budget);

  static CachingPolicy popular(const Catalog& catalog);
  static CachingPolicy uniform(const Catalog& catalog);
  static CachingPolicy everything(std::size_t n_files);

  std::size_t size() const { return q_.size(); }
  double budget() const { return budget_; }
  double operator[](std::size_t f) const { return q_[f]; }
  std::span<const double> values() const { return q_; }
  double sum() const;

 private:
  std::vector<double> q_;
  double budget_ = 0.0;
};

/// Backhaul-limited small cells without caches, used as the baseline.
struct TraditionalConfig {
  double backhaul_capacity = 0.0;  ///< bit/s per small cell
};

}  // namespace hetcache
