#include <benchmark/benchmark.h>

#include "hetcache/specfun.hpp"

namespace {

void BM_Hyp2f1Regime(benchmark::State& state) {
  const double x = -static_cast<double>(state.range(0)) / 100.0;
  const double d = 2.0 / 3.7;
  for (auto _ : state) benchmark::DoNotOptimize(hetcache::hyp2f1_neg_arg(-d, 4.0, 1.0 - d, x));
}
BENCHMARK(BM_Hyp2f1Regime)->Arg(10)->Arg(45)->Arg(90)->Arg(1000)->Arg(100000000);

void BM_KernelC123(benchmark::State& state) {
  const hetcache::NetworkConfig cfg = hetcache::NetworkConfig::reference();
  double x = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hetcache::kernels_c123(x, cfg));
    x = x < 50.0 ? x * 1.01 : 0.5;
  }
}
BENCHMARK(BM_KernelC123);

}  // namespace
