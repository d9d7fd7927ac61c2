#include <benchmark/benchmark.h>

#include "pnorm/pnorm.hpp"

namespace {

using namespace pnorm;

void BM_SymEig(benchmark::State& state) {
  RngStream rng(0);
  const SymMatrix m = random_spd(static_cast<std::size_t>(state.range(0)), SpectrumLaw::uniform(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(sym_eig(m));
}
BENCHMARK(BM_SymEig)->RangeMultiplier(4)->Range(32, 512)->Unit(benchmark::kMillisecond);

void BM_NewtonSchulz(benchmark::State& state) {
  RngStream rng(0);
  const SymMatrix m = random_spd_cond(static_cast<std::size_t>(state.range(0)), 1e2, rng);
  const int iters = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(newton_schulz_sqrt(m, iters));
}
BENCHMARK(BM_NewtonSchulz)->ArgsProduct({{32, 128, 512}, {5, 20}})->Unit(benchmark::kMillisecond);

void BM_Autocorrelation(benchmark::State& state) {
  RngStream rng(0);
  FeatureBlock f(static_cast<std::size_t>(state.range(0)), 196);
  for (std::size_t k = 0; k < f.channels(); ++k) {
    for (std::size_t n = 0; n < f.count(); ++n) f(k, n) = rng.uniform();
  }
  for (auto _ : state) benchmark::DoNotOptimize(autocorrelation(f));
}
BENCHMARK(BM_Autocorrelation)->RangeMultiplier(4)->Range(32, 512)->Unit(benchmark::kMicrosecond);

}  // namespace
