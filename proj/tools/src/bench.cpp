#include "pnorm_tools/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <numeric>

#include "pnorm/eig.hpp"
#include "pnorm/elempn.hpp"
#include "pnorm/errors.hpp"
#include "pnorm/fastpn.hpp"
#include "pnorm/specpn.hpp"

namespace pnorm::bench {

namespace {

struct OpName {
  TimedOp op;
  std::string_view name;
};

constexpr OpName kOpNames[] = {
    {TimedOp::MaxExpFast, "maxexp-fast"},
    {TimedOp::MaxExpSpectral, "maxexp-spectral"},
    {TimedOp::MaxExpElementwise, "maxexp-elementwise"},
    {TimedOp::GammaFast, "gamma-fast"},
    {TimedOp::GammaSpectral, "gamma-spectral"},
    {TimedOp::NewtonSchulz, "newton-schulz"},
};

using Clock = std::chrono::steady_clock;

template <class F>
TimingStats measure(F&& f, const TimingConfig& cfg) {
  for (int i = 0; i < cfg.warmup; ++i) f();
  std::vector<double> ms;
  ms.reserve(static_cast<std::size_t>(cfg.reps));
  for (int i = 0; i < cfg.reps; ++i) {
    const auto t0 = Clock::now();
    f();
    const auto t1 = Clock::now();
    ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  TimingStats s;
  s.mean_ms = std::accumulate(ms.begin(), ms.end(), 0.0) / static_cast<double>(ms.size());
  if (ms.size() > 1) {
    double ss = 0.0;
    for (double v : ms) ss += (v - s.mean_ms) * (v - s.mean_ms);
    s.stddev_ms = std::sqrt(ss / static_cast<double>(ms.size() - 1));
  }
  return s;
}

// Keeps results observable so the timed calls are not optimized away.
volatile double g_sink = 0.0;

void consume(const SymMatrix& m) { g_sink = g_sink + m(0, 0); }

int as_int(double param, TimedOp op) {
  const double r = std::round(param);
  if (r < 1.0 || r != param || r > 1e9) {
    throw DomainError(std::string(timed_op_name(op)) + " needs an integer parameter >= 1");
  }
  return static_cast<int>(r);
}

std::size_t bin_of(double v, std::size_t bins) {
  const double c = std::clamp(v, 0.0, 1.0);
  return std::min(bins - 1, static_cast<std::size_t>(c * static_cast<double>(bins)));
}

}  // namespace

std::string_view timed_op_name(TimedOp op) {
  for (const auto& e : kOpNames) {
    if (e.op == op) return e.name;
  }
  return "?";
}

TimedOp parse_timed_op(std::string_view name) {
  for (const auto& e : kOpNames) {
    if (e.name == name) return e.op;
  }
  throw DomainError("unknown timing op '" + std::string(name) + "'");
}

bool needs_integer_param(TimedOp op) {
  return op == TimedOp::MaxExpFast || op == TimedOp::GammaFast || op == TimedOp::NewtonSchulz;
}

TimingRow time_cell(TimedOp op, std::size_t d, double param, const TimingConfig& cfg) {
  if (cfg.reps < 1) throw DomainError("reps must be >= 1");
  if (cfg.warmup < 0) throw DomainError("warmup must be >= 0");
  if (d < 1) throw DimensionError("d must be >= 1");

  // Evenly spaced eigenvalues in [0.1, 1.1] under a seeded basis keep every
  // adjacent gap far above the spectral gap threshold at any d. The fast
  // MaxExp path gets the unit-trace copy it requires.
  RngStream rng(cfg.seed);
  const Eigen::Index n = static_cast<Eigen::Index>(d);
  Vector lambda(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    lambda(i) = d == 1 ? 1.0 : 1.1 - static_cast<double>(i) / static_cast<double>(d - 1);
  }
  const Matrix q = random_orthogonal(d, rng);
  const SymMatrix raw(q * lambda.asDiagonal() * q.transpose());
  const SymMatrix m = op == TimedOp::MaxExpFast ? trace_normalized(raw) : raw;
  const SymMatrix up = [&] {
    Matrix g(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = rng.normal();
    }
    return SymMatrix(g);
  }();

  TimingRow row;
  row.op = op;
  row.d = d;
  row.param = param;
  row.reps = cfg.reps;

  switch (op) {
    case TimedOp::MaxExpFast:
    case TimedOp::GammaFast: {
      const int p = as_int(param, op);
      const bool maxexp = op == TimedOp::MaxExpFast;
      auto fwd = [&] { return maxexp ? fast_maxexp_forward(m, p) : fast_gamma_int(m, p); };
      row.forward = measure([&] { consume(fwd().psi); }, cfg);
      const FastResult r = fwd();
      auto bwd = [&](MMCounter* c) {
        return maxexp ? fast_maxexp_backward(r.tape, up, c) : fast_gamma_int_backward(r.tape, up, c);
      };
      row.backward = measure([&] { consume(bwd(nullptr)); }, cfg);
      MMCounter counter;
      bwd(&counter);
      row.mm_forward = r.tape.mm_count_forward;
      row.mm_backward = counter.backward;
      break;
    }
    case TimedOp::MaxExpSpectral:
    case TimedOp::GammaSpectral: {
      const PNConfig pn = op == TimedOp::MaxExpSpectral ? PNConfig::maxexp(param) : PNConfig::gamma(param);
      pn.validate();
      SpectralGapConfig gap;
      gap.seed = cfg.seed;
      row.forward = measure([&] { consume(spn_forward(m, pn, gap).psi); }, cfg);
      const SpnResult r = spn_forward(m, pn, gap);
      row.backward = measure([&] { consume(spn_backward(up, pn, r.decomp, gap.gap)); }, cfg);
      break;
    }
    case TimedOp::MaxExpElementwise: {
      const PNConfig pn = PNConfig::maxexp(param);
      pn.validate();
      row.forward = measure([&] { consume(pn_forward(m, pn)); }, cfg);
      row.backward = measure([&] { consume(pn_backward(m, up, pn)); }, cfg);
      break;
    }
    case TimedOp::NewtonSchulz: {
      const int iters = as_int(param, op);
      row.forward = measure([&] { consume(newton_schulz_sqrt(m, iters)); }, cfg);
      MMCounter counter;
      newton_schulz_sqrt(m, iters, &counter);
      row.mm_forward = counter.forward;
      break;
    }
  }
  return row;
}

PushforwardResult pushforward(const PNConfig& op, const PushforwardConfig& cfg) {
  if (cfg.d < 1 || cfg.samples < 1 || cfg.bins < 1) throw DomainError("pushforward: d, samples and bins must be >= 1");
  if (cfg.top_j < 1 || cfg.top_j > cfg.d) throw DomainError("pushforward: top_j must lie in [1, d]");
  PNConfig pn = op;
  pn.trace_normalize = false;
  pn.validate();

  PushforwardResult out;
  out.pre.assign(cfg.bins, 0.0);
  out.post.assign(cfg.bins, 0.0);
  std::vector<double> top;
  top.reserve(cfg.samples * cfg.top_j);
  double post_sum = 0.0;

  RngStream rng(cfg.seed);
  const auto gap = SpectralGapConfig::disabled();
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    SymMatrix m = cfg.identity_spectrum ? SymMatrix::identity(cfg.d) : random_spd(cfg.d, cfg.law, rng);
    if (cfg.trace_normalize) m = trace_normalized(m);
    const Vector pre = sym_eig(m).values;
    const Vector post = sym_eig(spn_forward(m, pn, gap).psi).values;
    for (Eigen::Index i = 0; i < pre.size(); ++i) {
      out.pre[bin_of(pre(i), cfg.bins)] += 1.0;
      out.post[bin_of(post(i), cfg.bins)] += 1.0;
      post_sum += post(i);
    }
    for (std::size_t i = 0; i < cfg.top_j; ++i) top.push_back(post(static_cast<Eigen::Index>(i)));
  }
  const double total = static_cast<double>(cfg.samples * cfg.d);
  for (auto& v : out.pre) v /= total;
  for (auto& v : out.post) v /= total;
  out.post_mean = post_sum / total;

  const double mean = std::accumulate(top.begin(), top.end(), 0.0) / static_cast<double>(top.size());
  double ss = 0.0;
  for (double v : top) ss += (v - mean) * (v - mean);
  out.top_var = ss / static_cast<double>(top.size());
  return out;
}

double histogram_l1(const Histogram& a, const Histogram& b) {
  if (a.size() != b.size()) throw DimensionError("histogram_l1: bin counts differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

double histogram_w1(const Histogram& a, const Histogram& b) {
  if (a.size() != b.size()) throw DimensionError("histogram_w1: bin counts differ");
  double ca = 0.0, cb = 0.0, s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ca += a[i];
    cb += b[i];
    s += std::abs(ca - cb);
  }
  return s / static_cast<double>(a.size());
}

std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

}  // namespace pnorm::bench
