#include <benchmark/benchmark.h>

#include "hetcache/simulator.hpp"

using namespace hetcache;

namespace {

void BM_Snapshot(benchmark::State& state) {
  const NetworkConfig cfg = NetworkConfig::reference();
  const Catalog cat(1000, 100, 0.5);
  const CachingPolicy pol = CachingPolicy::uniform(cat);
  SimOptions opt;
  opt.sinr_users = static_cast<std::size_t>(state.range(0));
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_snapshot(cfg, cat, pol, opt, i++));
}
BENCHMARK(BM_Snapshot)->Arg(16)->Arg(64)->Arg(256)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_AssociationOnly(benchmark::State& state) {
  const NetworkConfig cfg = NetworkConfig::reference();
  const Catalog cat(1000, 100, 0.5);
  auto caches = std::make_shared<IntervalCache>(CachingPolicy::uniform(cat));
  Rng rng(3);
  for (auto _ : state) {
    state.PauseTiming();
    Snapshot s = draw_snapshot(cfg, cat, caches, Region{}, rng);
    state.ResumeTiming();
    associate(s, cfg);
    benchmark::DoNotOptimize(s.links.data());
  }
}
BENCHMARK(BM_AssociationOnly)->Unit(benchmark::kMillisecond);

}  // namespace
