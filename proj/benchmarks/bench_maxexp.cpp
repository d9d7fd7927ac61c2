#include <benchmark/benchmark.h>

#include "pnorm/pnorm.hpp"

namespace {

using namespace pnorm;

// Spectrum evenly spaced in [0.1, 1.1) so the spectral path never needs
// regularization. Only the fast path gets the unit-trace copy (at d = 512 its
// spacing falls below the 1e-5 gap); the spectral path divides by the trace
// after the eigendecomposition.
SymMatrix spaced_input(std::size_t d, bool unit_trace) {
  RngStream rng(0);
  const Matrix u = random_orthogonal(d, rng);
  Vector lambda(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < lambda.size(); ++i) lambda(i) = 0.1 + static_cast<double>(i) / static_cast<double>(d);
  const SymMatrix m(Matrix(u * lambda.asDiagonal() * u.transpose()));
  return unit_trace ? trace_normalized(m) : m;
}

SymMatrix upstream(std::size_t d) { return gradcheck_upstream(d, 1); }

void BM_FastMaxExpForward(benchmark::State& state) {
  const SymMatrix m = spaced_input(static_cast<std::size_t>(state.range(0)), true);
  const int eta = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(fast_maxexp_forward(m, eta));
}

void BM_FastMaxExpBackward(benchmark::State& state) {
  const std::size_t d = static_cast<std::size_t>(state.range(0));
  const SymMatrix m = spaced_input(d, true), u = upstream(d);
  const FastResult fwd = fast_maxexp_forward(m, static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(fast_maxexp_backward(fwd.tape, u));
}

void BM_SpectralMaxExpForward(benchmark::State& state) {
  const SymMatrix m = spaced_input(static_cast<std::size_t>(state.range(0)), false);
  const PNConfig cfg = PNConfig::maxexp(static_cast<double>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(spn_forward(m, cfg));
}

void BM_SpectralMaxExpBackward(benchmark::State& state) {
  const std::size_t d = static_cast<std::size_t>(state.range(0));
  const SymMatrix m = spaced_input(d, false), u = upstream(d);
  const PNConfig cfg = PNConfig::maxexp(static_cast<double>(state.range(1)));
  const SpnResult fwd = spn_forward(m, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(spn_backward(u, cfg, fwd.decomp));
}

void BM_ElementwiseMaxExp(benchmark::State& state) {
  // Element-wise operators need non-negative entries.
  const SymMatrix m(Matrix(spaced_input(static_cast<std::size_t>(state.range(0)), false).matrix().cwiseAbs()));
  const PNConfig cfg = PNConfig::maxexp(static_cast<double>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(pn_forward(m, cfg));
}

void sizes(benchmark::internal::Benchmark* b) {
  for (int d : {32, 128, 512}) {
    for (int eta : {8, 50, 512}) b->Args({d, eta});
  }
  b->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(BM_FastMaxExpForward)->Apply(sizes);
BENCHMARK(BM_FastMaxExpBackward)->Apply(sizes);
BENCHMARK(BM_SpectralMaxExpForward)->Apply(sizes);
BENCHMARK(BM_SpectralMaxExpBackward)->Apply(sizes);
BENCHMARK(BM_ElementwiseMaxExp)->Apply(sizes);
