#include <doctest.h>

#include <cmath>
#include <numeric>

#include "hetcache/errors.hpp"
#include "hetcache/model.hpp"

using namespace hetcache;

TEST_SUITE("model") {

TEST_CASE("unit conversions invert each other") {
  CHECK(dbm_to_watt(30.0) == doctest::Approx(1.0));
  CHECK(dbm_to_watt(46.0) == doctest::Approx(39.810717055349734));
  CHECK(watt_to_dbm(dbm_to_watt(-95.0)) == doctest::Approx(-95.0));
  CHECK(nats_to_bits(bits_to_nats(3.25)) == doctest::Approx(3.25));
  CHECK(nats_to_bits(1.0) == doctest::Approx(1.4426950408889634));
  CHECK(per_disk(1.0, 250.0) == doctest::Approx(1.0 / (M_PI * 62500.0)));
}

TEST_CASE("reference network is valid and has the documented values") {
  const NetworkConfig cfg = NetworkConfig::reference();
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.lambda_helper / cfg.lambda_macro == doctest::Approx(50.0));
  CHECK(cfg.lambda_user / cfg.lambda_macro == doctest::Approx(50.0));
  CHECK(cfg.antennas_macro == 4);
  CHECK(cfg.bias_helper == 10.0);
  CHECK(cfg.alpha == 3.7);
  CHECK(cfg.bandwidth == 20e6);
  CHECK(cfg.rate_target == 2e6);
  CHECK(watt_to_dbm(cfg.power_macro) == doctest::Approx(46.0));
  CHECK(watt_to_dbm(cfg.power_helper) == doctest::Approx(21.0));
  CHECK(cfg.warnings().empty());
}

TEST_CASE("invalid networks are rejected") {
  NetworkConfig cfg = NetworkConfig::reference();
  cfg.alpha = 2.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = NetworkConfig::reference();
  cfg.lambda_macro = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = NetworkConfig::reference();
  cfg.power_helper = -1.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = NetworkConfig::reference();
  cfg.antennas_macro = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = NetworkConfig::reference();
  cfg.rate_target = std::nan("");
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

TEST_CASE("sparse users raise a warning, not an error") {
  NetworkConfig cfg = NetworkConfig::reference();
  cfg.lambda_user = 0.5 * cfg.lambda_macro;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.warnings().size() == 1);
}

TEST_CASE("zipf popularity is normalized and decreasing") {
  for (double skew : {0.0, 0.5, 1.0, 2.0}) {
    const auto p = zipf_popularity(1000, skew);
    CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    for (std::size_t f = 1; f < p.size(); ++f) CHECK(p[f] <= p[f - 1]);
  }
  const auto p = zipf_popularity(3, 1.0);
  CHECK(p[0] == doctest::Approx(6.0 / 11.0));
  CHECK(p[2] == doctest::Approx(2.0 / 11.0));
  CHECK_THROWS_AS(zipf_popularity(0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(zipf_popularity(5, -0.1), InvalidArgument);
}

TEST_CASE("catalog sampling follows the popularity") {
  const Catalog cat(10, 3, 1.0);
  Rng rng(42);
  std::vector<int> hits(10);
  const int n = 200000;
  for (int i = 0; i < n; ++i) ++hits[cat.sample_request(rng)];
  for (std::size_t f = 0; f < 10; ++f)
    CHECK(hits[f] / double(n) == doctest::Approx(cat.popularity(f)).epsilon(0.03));
  CHECK(cat.request_from_uniform(0.0) == 0);
  CHECK(cat.request_from_uniform(0.999999999) == 9);
  CHECK_THROWS_AS(Catalog(5, 6, 1.0), InvalidArgument);
}

TEST_CASE("caching policies enforce box and budget") {
  const Catalog cat(5, 2, 0.5);
  const CachingPolicy pop = CachingPolicy::popular(cat);
  CHECK(pop[0] == 1.0);
  CHECK(pop[1] == 1.0);
  CHECK(pop[2] == 0.0);
  CHECK(pop.sum() == 2.0);
  const CachingPolicy uni = CachingPolicy::uniform(cat);
  CHECK(uni[4] == doctest::Approx(0.4));
  CHECK(CachingPolicy::everything(7).sum() == 7.0);

  CHECK_THROWS_AS(CachingPolicy({0.5, 1.2}, 2.0), InvalidArgument);
  CHECK_THROWS_AS(CachingPolicy({0.5, -0.2}, 2.0), InvalidArgument);
  CHECK_THROWS_AS(CachingPolicy({1.0, 1.0, 0.5}, 2.0), InvalidArgument);
  const CachingPolicy clipped({1.0 + 1e-12, -1e-12}, 1.0);
  CHECK(clipped[0] == 1.0);
  CHECK(clipped[1] == 0.0);
}

}
