#include <benchmark/benchmark.h>

#include "hetcache/analytics.hpp"
#include "hetcache/optimizers.hpp"
#include "hetcache/rate_table.hpp"

using namespace hetcache;

namespace {

const NetworkConfig kCfg = NetworkConfig::reference();
const Catalog kCatalog(1000, 100, 0.5);

void BM_SuccessProbability(benchmark::State& state) {
  const CachingPolicy pol = maximize_success_lower_bound(kCfg, kCatalog).policy;
  for (auto _ : state) benchmark::DoNotOptimize(success_probability(kCfg, kCatalog, pol));
}
BENCHMARK(BM_SuccessProbability)->Unit(benchmark::kMicrosecond);

void BM_AseQuadrature(benchmark::State& state) {
  const CachingPolicy pol = CachingPolicy::uniform(kCatalog);
  for (auto _ : state) benchmark::DoNotOptimize(ase_quadrature(kCfg, kCatalog, pol));
}
BENCHMARK(BM_AseQuadrature)->Unit(benchmark::kMillisecond);

void BM_AseTabulated(benchmark::State& state) {
  const CachingPolicy pol = CachingPolicy::uniform(kCatalog);
  const RateTable table(kCfg);
  for (auto _ : state) benchmark::DoNotOptimize(ase_tabulated(table, kCfg, kCatalog, pol));
}
BENCHMARK(BM_AseTabulated)->Unit(benchmark::kMicrosecond);

void BM_LowerBoundSolver(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(maximize_success_lower_bound(kCfg, kCatalog));
}
BENCHMARK(BM_LowerBoundSolver)->Unit(benchmark::kMicrosecond);

void BM_LocalSearchCoverage(benchmark::State& state) {
  LocalSearchOptions opt;
  opt.restarts = 3;
  opt.seeds = default_seeds(kCfg, kCatalog);
  const CoverageObjective obj(kCfg, kCatalog);
  for (auto _ : state) {
    Rng rng(1);
    benchmark::DoNotOptimize(local_search(obj, kCatalog, opt, rng));
  }
}
BENCHMARK(BM_LocalSearchCoverage)->Unit(benchmark::kMillisecond);

}  // namespace
