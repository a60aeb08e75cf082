#include "hetcache/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hetcache/errors.hpp"

namespace hetcache {

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }
double bits_to_nats(double bits) { return bits * std::numbers::ln2; }
double nats_to_bits(double nats) { return nats / std::numbers::ln2; }

double per_disk(double count, double radius_m) {
  return count / (std::numbers::pi * radius_m * radius_m);
}

NetworkConfig NetworkConfig::reference() {
  NetworkConfig cfg;
  cfg.lambda_macro = per_disk(1.0, 250.0);
  cfg.lambda_helper = per_disk(50.0, 250.0);
  cfg.lambda_user = per_disk(50.0, 250.0);
  cfg.power_macro = dbm_to_watt(46.0);
  cfg.power_helper = dbm_to_watt(21.0);
  cfg.antennas_macro = 4;
  cfg.bias_macro = 1.0;
  cfg.bias_helper = 10.0;
  cfg.alpha = 3.7;
  cfg.bandwidth = 20e6;
  cfg.rate_target = 2e6;
  cfg.noise_power = dbm_to_watt(-95.0);
  return cfg;
}

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

}  // namespace

void NetworkConfig::validate() const {
  require(finite_nonneg(lambda_macro) && finite_nonneg(lambda_helper) &&
              finite_nonneg(lambda_user),
          "densities must be finite and non-negative");
  require(lambda_macro > 0.0, "the macro tier needs a positive density");
  require(std::isfinite(power_macro) && power_macro > 0.0 && std::isfinite(power_helper) &&
              power_helper > 0.0,
          "transmit powers must be positive");
  require(antennas_macro >= 1, "macro antenna count must be at least 1");
  require(finite_nonneg(bias_macro) && finite_nonneg(bias_helper),
          "association biases must be non-negative");
  require(bias_macro > 0.0, "macro bias must be positive");
  require(std::isfinite(alpha) && alpha > 2.0, "path-loss exponent must exceed 2");
  require(std::isfinite(bandwidth) && bandwidth > 0.0, "bandwidth must be positive");
  require(std::isfinite(rate_target) && rate_target > 0.0, "rate target must be positive");
  require(finite_nonneg(noise_power), "noise power must be non-negative");
}

std::vector<std::string> NetworkConfig::warnings() const {
  std::vector<std::string> out;
  if (lambda_user < lambda_macro)
    out.emplace_back("user density is below macro density; macro load model is loose");
  return out;
}

std::vector<double> zipf_popularity(std::size_t n_files, double skew) {
  if (n_files == 0) throw InvalidArgument("catalog must contain at least one file");
  if (!std::isfinite(skew) || skew < 0.0) throw InvalidArgument("Zipf skew must be >= 0");
  std::vector<double> p(n_files);
  for (std::size_t f = 0; f < n_files; ++f) p[f] = std::pow(static_cast<double>(f + 1), -skew);
  // Sum smallest first for a slightly better normaliser.
  double norm = 0.0;
  for (std::size_t f = n_files; f-- > 0;) norm += p[f];
  for (double& v : p) v /= norm;
  return p;
}

Catalog::Catalog(std::size_t n_files, std::size_t cache_size, double zipf_skew)
    : cache_size_(cache_size), skew_(zipf_skew), popularity_(zipf_popularity(n_files, zipf_skew)) {
  if (cache_size > n_files) throw InvalidArgument("cache size exceeds catalog size");
  cdf_.resize(n_files);
  double acc = 0.0;
  for (std::size_t f = 0; f < n_files; ++f) {
    acc += popularity_[f];
    cdf_[f] = acc;
  }
  cdf_.back() = 1.0;
}

std::size_t Catalog::request_from_uniform(double u) const {
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return static_cast<std::size_t>(it - cdf_.begin());
}

std::size_t Catalog::sample_request(Rng& rng) const {
  return request_from_uniform(std::uniform_real_distribution<double>(0.0, 1.0)(rng));
}

CachingPolicy::CachingPolicy(std::vector<double> q, double budget) : q_(std::move(q)), budget_(budget) {
  constexpr double tol = 1e-9;
  if (!std::isfinite(budget) || budget < 0.0) throw InvalidArgument("cache budget must be >= 0");
  double total = 0.0;
  for (double& v : q_) {
    if (!std::isfinite(v) || v < -tol || v > 1.0 + tol)
      throw InvalidArgument("caching probabilities must lie in [0, 1]");
    v = std::clamp(v, 0.0, 1.0);
    total += v;
  }
  if (total > budget + tol * std::max(1.0, budget))
    throw InvalidArgument("caching probabilities exceed the cache budget");
}

CachingPolicy CachingPolicy::popular(const Catalog& catalog) {
  std::vector<double> q(catalog.size(), 0.0);
  std::fill_n(q.begin(), catalog.cache_size(), 1.0);
  return {std::move(q), static_cast<double>(catalog.cache_size())};
}

CachingPolicy CachingPolicy::uniform(const Catalog& catalog) {
  const double v = static_cast<double>(catalog.cache_size()) / static_cast<double>(catalog.size());
  return {std::vector<double>(catalog.size(), v), static_cast<double>(catalog.cache_size())};
}

CachingPolicy CachingPolicy::everything(std::size_t n_files) {
  return {std::vector<double>(n_files, 1.0), static_cast<double>(n_files)};
}

double CachingPolicy::sum() const {
  double s = 0.0;
  for (double v : q_) s += v;
  return s;
}

}  // namespace hetcache
