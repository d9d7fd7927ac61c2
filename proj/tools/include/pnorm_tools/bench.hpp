#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pnorm/pn_config.hpp"
#include "pnorm/rng.hpp"

namespace pnorm::bench {

enum class TimedOp {
  MaxExpFast,
  MaxExpSpectral,
  MaxExpElementwise,
  GammaFast,
  GammaSpectral,
  NewtonSchulz,
};

std::string_view timed_op_name(TimedOp op);
// Throws DomainError for unknown names.
TimedOp parse_timed_op(std::string_view name);
// Fast paths take integer parameters; Newton-Schulz takes the iteration count.
bool needs_integer_param(TimedOp op);

struct TimingStats {
  double mean_ms = 0.0;
  double stddev_ms = 0.0;
};

struct TimingConfig {
  int reps = 10;
  int warmup = 3;
  std::uint64_t seed = 0;
};

struct TimingRow {
  TimedOp op = TimedOp::MaxExpFast;
  std::size_t d = 0;
  double param = 0.0;
  int reps = 0;
  TimingStats forward;
  std::optional<TimingStats> backward;  // none for Newton-Schulz
  std::optional<int> mm_forward;        // product-based paths only
  std::optional<int> mm_backward;
};

// Times one (op, d, param) cell on a seeded input with a well-separated
// spectrum. Warmup runs are discarded.
TimingRow time_cell(TimedOp op, std::size_t d, double param, const TimingConfig& cfg);

struct PushforwardConfig {
  SpectrumLaw law = SpectrumLaw::beta(2.0, 5.0);
  bool identity_spectrum = false;  // M = 𝕀 instead of random draws
  std::size_t d = 8;
  std::size_t samples = 200;
  std::size_t bins = 50;
  std::size_t top_j = 5;
  bool trace_normalize = true;
  std::uint64_t seed = 0;
};

// Bin frequencies on [0, 1]; they sum to 1.
using Histogram = std::vector<double>;

struct PushforwardResult {
  Histogram pre;
  Histogram post;
  // Population variance of the top-j output eigenvalues pooled over samples.
  double top_var = 0.0;
  double post_mean = 0.0;
};

// Applies the spectral operator to `samples` seeded matrices and summarizes
// input and output spectra. cfg.trace_normalize of the operator is ignored:
// inputs are normalized (or not) by the push-forward config.
PushforwardResult pushforward(const PNConfig& op, const PushforwardConfig& cfg);

// Σ|a_i − b_i| over bins.
double histogram_l1(const Histogram& a, const Histogram& b);
// Σ|A_i − B_i|·width over cumulative sums: binned Wasserstein-1 on [0, 1].
double histogram_w1(const Histogram& a, const Histogram& b);

// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace pnorm::bench
