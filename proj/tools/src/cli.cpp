#include "pnorm_tools/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "pnorm/errors.hpp"
#include "pnorm/fastpn.hpp"
#include "pnorm/gradcheck.hpp"
#include "pnorm/hdp.hpp"
#include "pnorm/io.hpp"
#include "pnorm/elempn.hpp"
#include "pnorm/sop.hpp"
#include "pnorm/specpn.hpp"
#include "pnorm_tools/bench.hpp"

namespace pnorm::cli {

namespace {

using bench::format_double;

// Thrown for bad flag combinations found after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 0;
  std::string out_path;
  int threads = 1;
};

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < n; i = next++) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string opt(const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); }

PNConfig pn_config(const std::string& op, double param, double eps) {
  switch (parse_op(op)) {
    case PnOp::Identity: return PNConfig::identity();
    case PnOp::Gamma: return PNConfig::gamma(param, eps);
    case PnOp::MaxExp: return PNConfig::maxexp(param, eps);
    case PnOp::AsinhE: return PNConfig::asinhe(param, eps);
    case PnOp::SigmE: return PNConfig::sigme(param, eps);
    case PnOp::HDP: return PNConfig::hdp(param, eps);
  }
  return PNConfig::identity();
}

// ---- time ----

struct TimeArgs {
  std::string op = "maxexp-fast";
  std::vector<std::size_t> d{64};
  std::vector<double> params;
  int reps = 10;
  int warmup = 3;
};

int cmd_time(const TimeArgs& a, const Globals& g, std::ostream& out) {
  const bench::TimedOp op = bench::parse_timed_op(a.op);
  std::vector<double> params = a.params;
  if (params.empty()) {
    switch (op) {
      case bench::TimedOp::GammaFast:
      case bench::TimedOp::GammaSpectral: params = {2}; break;
      case bench::TimedOp::NewtonSchulz: params = {20}; break;
      default: params = {50}; break;
    }
  }
  struct Cell {
    std::size_t d;
    double param;
  };
  std::vector<Cell> cells;
  for (std::size_t d : a.d) {
    for (double p : params) cells.push_back({d, p});
  }
  bench::TimingConfig cfg{a.reps, a.warmup, g.seed};
  std::vector<bench::TimingRow> rows(cells.size());
  parallel_for(cells.size(), g.threads,
               [&](std::size_t i) { rows[i] = bench::time_cell(op, cells[i].d, cells[i].param, cfg); });

  out << "op,d,param,reps,fwd_mean_ms,fwd_std_ms,bwd_mean_ms,bwd_std_ms,mm_forward,mm_backward\n";
  for (const auto& r : rows) {
    out << bench::timed_op_name(r.op) << ',' << r.d << ',' << format_double(r.param) << ',' << r.reps << ','
        << format_double(r.forward.mean_ms) << ',' << format_double(r.forward.stddev_ms) << ','
        << (r.backward ? format_double(r.backward->mean_ms) : "") << ','
        << (r.backward ? format_double(r.backward->stddev_ms) : "") << ',' << opt(r.mm_forward) << ','
        << opt(r.mm_backward) << '\n';
  }
  return kOk;
}

// ---- pushforward ----

struct PushArgs {
  std::string op = "maxexp";
  std::vector<double> params{5, 20, 80};
  std::string law = "beta";
  double a = 2.0;
  double b = 5.0;
  std::size_t d = 8;
  std::size_t samples = 200;
  std::size_t bins = 50;
  std::size_t top_j = 5;
  bool no_trace_normalize = false;
  std::optional<double> compare_t;
  bool check = false;
};

bench::PushforwardConfig push_config(const PushArgs& a, const Globals& g) {
  bench::PushforwardConfig c;
  if (a.law == "beta") {
    c.law = SpectrumLaw::beta(a.a, a.b);
  } else if (a.law == "uniform") {
    c.law = SpectrumLaw::uniform();
  } else if (a.law == "identity") {
    c.identity_spectrum = true;
  } else {
    throw UsageError("unknown spectrum law '" + a.law + "' (beta, uniform, identity)");
  }
  c.d = a.d;
  c.samples = a.samples;
  c.bins = a.bins;
  c.top_j = std::min(a.top_j, a.d);
  c.trace_normalize = !a.no_trace_normalize;
  c.seed = g.seed;
  return c;
}

int cmd_pushforward(const PushArgs& a, const Globals& g, std::ostream& out) {
  const bench::PushforwardConfig cfg = push_config(a, g);

  if (a.compare_t) {
    const double t = *a.compare_t;
    const double eta = eta_of_t(t);
    const auto mx = bench::pushforward(PNConfig::maxexp(eta), cfg);
    const auto hd = bench::pushforward(PNConfig::hdp(t), cfg);
    out << "t,eta,d,samples,hist_l1,cdf_l1\n";
    out << format_double(t) << ',' << format_double(eta) << ',' << cfg.d << ',' << cfg.samples << ','
        << format_double(bench::histogram_l1(mx.post, hd.post)) << ','
        << format_double(bench::histogram_w1(mx.post, hd.post)) << '\n';
    return kOk;
  }

  std::vector<bench::PushforwardResult> rows(a.params.size());
  parallel_for(a.params.size(), g.threads,
               [&](std::size_t i) { rows[i] = bench::pushforward(pn_config(a.op, a.params[i], 1e-6), cfg); });

  out << "op,param,d,samples,top_j,top_var,post_mean";
  for (std::size_t i = 0; i < cfg.bins; ++i) out << ",pre_" << i;
  for (std::size_t i = 0; i < cfg.bins; ++i) out << ",post_" << i;
  out << '\n';
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    out << a.op << ',' << format_double(a.params[k]) << ',' << cfg.d << ',' << cfg.samples << ',' << cfg.top_j
        << ',' << format_double(r.top_var) << ',' << format_double(r.post_mean);
    for (double v : r.pre) out << ',' << format_double(v);
    for (double v : r.post) out << ',' << format_double(v);
    out << '\n';
  }
  if (a.check) {
    for (std::size_t k = 1; k < rows.size(); ++k) {
      if (rows[k].top_var > rows[k - 1].top_var) return kViolation;
    }
  }
  return kOk;
}

// ---- bounds ----

struct BoundsArgs {
  std::vector<double> etas;
  std::vector<double> ts;
  std::size_t lambdas = 1000;
  double t_scale = 1.0;
};

int cmd_bounds(const BoundsArgs& a, std::ostream& out, std::ostream& err) {
  BoundGrid grid = BoundGrid::standard();
  if (!a.etas.empty() || !a.ts.empty()) {
    grid.etas = a.etas;
    grid.ts = a.ts;
  }
  if (a.lambdas < 1) throw UsageError("--lambdas must be >= 1");
  grid.lambdas.clear();
  for (std::size_t i = 1; i <= a.lambdas; ++i) {
    grid.lambdas.push_back(static_cast<double>(i) / static_cast<double>(a.lambdas));
  }
  grid.t_scale = a.t_scale;

  const auto rows = verify_bounds(grid);
  int bad = 0;
  out << "eta,t,eps1,eps2,eps3,eps4,max_violation\n";
  for (const auto& r : rows) {
    out << format_double(r.eta) << ',' << format_double(r.t) << ',' << format_double(r.eps1) << ','
        << format_double(r.eps2) << ',' << format_double(r.eps3) << ',' << format_double(r.eps4) << ','
        << format_double(r.max_violation) << '\n';
    bad += r.violations > 0;
  }
  err << "bounds: " << rows.size() << " rows, " << bad << " with violations\n";
  return bad == 0 ? kOk : kViolation;
}

// ---- pool ----

struct PoolArgs {
  std::string input;
  std::string op = "identity";
  double param = 1.0;
  double eps = 1e-6;
  std::string engine = "elementwise";
  double beta = 0.0;
  std::size_t coord_z = 0;
  double sigma = 0.5;
  double alpha = 1.0;
  std::string grid;
  bool no_trace_normalize = false;
};

Coordinates parse_grid(const std::string& s, std::size_t n) {
  const auto x = s.find('x');
  std::size_t w = 0, h = 0;
  try {
    if (x == std::string::npos) throw std::invalid_argument(s);
    w = std::stoul(s.substr(0, x));
    h = std::stoul(s.substr(x + 1));
  } catch (const std::exception&) {
    throw UsageError("--grid expects WxH, got '" + s + "'");
  }
  if (w * h != n) throw UsageError("--grid " + s + " does not match the " + std::to_string(n) + " feature columns");
  return coordinate_grid(w, h);
}

int cmd_pool(const PoolArgs& a, std::ostream& out) {
  const FeatureBlock block = read_features(std::filesystem::path(a.input));
  PoolSpec spec;
  spec.beta = a.beta;
  std::optional<Coordinates> coords;
  if (a.coord_z > 0) {
    spec.coord = CoordEncoderConfig::make(a.coord_z, a.sigma, a.alpha);
    if (a.grid.empty()) throw UsageError("--coord-z needs --grid WxH");
    coords = parse_grid(a.grid, block.count());
  }
  const SymMatrix m = autocorrelation(block, spec, coords ? &*coords : nullptr);

  PNConfig pn = pn_config(a.op, a.param, a.eps);
  if (a.no_trace_normalize) pn.trace_normalize = false;
  pn.validate();

  SymMatrix psi(m.dim());
  if (a.engine == "elementwise") {
    psi = pn_forward(m, pn);
  } else if (a.engine == "spectral") {
    SpectralGapConfig gap;
    psi = spn_forward(m, pn, gap).psi;
  } else if (a.engine == "fast") {
    const double r = std::round(pn.param);
    if (r < 1.0 || r != pn.param) throw UsageError("engine fast needs an integer parameter");
    if (pn.op == PnOp::MaxExp) {
      // Same normalization as the spectral path, then 𝕀 − (𝕀 − X)^η by squaring.
      const double tau = pn.trace_normalize ? m.trace() + pn.eps : 1.0;
      const SymMatrix eye = SymMatrix::identity(m.dim());
      psi = eye - fast_gamma_int(eye - m * (1.0 / tau), static_cast<int>(r)).psi;
    } else if (pn.op == PnOp::Gamma) {
      const SymMatrix shifted(m.matrix() + pn.eps * Matrix::Identity(m.matrix().rows(), m.matrix().cols()));
      psi = fast_gamma_int(shifted, static_cast<int>(r)).psi;
    } else {
      throw UsageError("engine fast supports maxexp and gamma only");
    }
  } else {
    throw UsageError("unknown engine '" + a.engine + "' (elementwise, spectral, fast)");
  }
  write_symmat(out, psi);
  return kOk;
}

// ---- kappa ----

struct KappaArgs {
  int j_max = 10;
  std::vector<int> ns{1, 2, 4, 8, 16, 32};
};

int cmd_kappa(const KappaArgs& a, std::ostream& out) {
  if (a.j_max < 0) throw UsageError("--j-max must be >= 0");
  out << "J,N,kappa,kappa_prime\n";
  for (int n : a.ns) {
    for (int j = 0; j <= a.j_max; ++j) {
      out << j << ',' << n << ',' << format_double(support_ratio(j, n)) << ','
          << format_double(variance_ratio(n)) << '\n';
    }
  }
  return kOk;
}

// ---- gradcheck ----

struct GradArgs {
  std::size_t d = 6;
  int seeds = 5;
  double tol = 1e-4;
  double step = 0.0;
  bool negate = false;
};

int cmd_gradcheck(const GradArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  if (a.seeds < 1) throw UsageError("--seeds must be >= 1");
  SuiteConfig base = SuiteConfig::standard();
  std::vector<GradCase> cases;
  for (const auto& c : base.cases) {
    if (c.seed != 1) continue;
    for (int s = 0; s < a.seeds; ++s) {
      GradCase k = c;
      k.d = a.d;
      k.seed = g.seed + static_cast<std::uint64_t>(s) + 1;
      cases.push_back(k);
    }
  }
  std::vector<GradCheckReport> rows(cases.size());
  parallel_for(cases.size(), g.threads, [&](std::size_t i) { rows[i] = check_case(cases[i], a.step, a.negate); });
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& x, const auto& y) { return x.max_rel_error > y.max_rel_error; });

  int bad = 0;
  out << "op,d,param,seed,max_rel_error,step\n";
  for (const auto& r : rows) {
    out << r.op << ',' << r.d << ',' << format_double(r.param) << ',' << r.seed << ','
        << format_double(r.max_rel_error) << ',' << format_double(r.step) << '\n';
    bad += !(r.max_rel_error <= a.tol);
  }
  err << "gradcheck: " << rows.size() << " cases, " << bad << " above " << format_double(a.tol) << '\n';
  return bad == 0 ? kOk : kViolation;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Power normalization toolkit: timing, spectra, bounds and pooling", "pnorm"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Seed for every generated input");
  app.add_option("--out", g.out_path, "Write results here instead of stdout");
  app.add_option("--threads", g.threads, "Worker threads across independent cells")->check(CLI::PositiveNumber);

  TimeArgs ta;
  auto* time = app.add_subcommand("time", "Forward/backward wall time and matrix-product counts");
  time->add_option("--op", ta.op,
                   "maxexp-fast, maxexp-spectral, maxexp-elementwise, gamma-fast, gamma-spectral, newton-schulz");
  time->add_option("--d", ta.d, "Matrix sides")->delimiter(',');
  time->add_option("--eta,--gamma,--iters,--param", ta.params, "Operator parameters")->delimiter(',');
  time->add_option("--reps", ta.reps, "Timed repetitions")->check(CLI::PositiveNumber);
  time->add_option("--warmup", ta.warmup, "Discarded repetitions")->check(CLI::NonNegativeNumber);

  PushArgs pa;
  auto* push = app.add_subcommand("pushforward", "Eigenvalue histograms before and after a spectral operator");
  push->add_option("--op", pa.op, "maxexp, gamma, hdp, sigme, asinhe");
  push->add_option("--param,--eta", pa.params, "Operator parameters")->delimiter(',');
  push->add_option("--law", pa.law, "beta, uniform or identity");
  push->add_option("--a", pa.a, "Beta shape a");
  push->add_option("--b", pa.b, "Beta shape b");
  push->add_option("--d", pa.d, "Matrix side")->check(CLI::PositiveNumber);
  push->add_option("--samples", pa.samples, "Matrices per parameter")->check(CLI::PositiveNumber);
  push->add_option("--bins", pa.bins, "Histogram bins on [0, 1]")->check(CLI::PositiveNumber);
  push->add_option("--top-j", pa.top_j, "Leading eigenvalues in the variance")->check(CLI::PositiveNumber);
  push->add_flag("--no-trace-normalize", pa.no_trace_normalize, "Keep the raw spectrum");
  push->add_option("--compare-t", pa.compare_t, "Compare MaxExp(eta(t)) with HDP(t) instead");
  push->add_flag("--check", pa.check, "Exit 1 if the top-j variance grows along --param");

  BoundsArgs ba;
  auto* bounds = app.add_subcommand("bounds", "Check the MaxExp/Gamma/HDP bounds and report the gaps");
  bounds->add_option("--eta", ba.etas, "MaxExp exponents (rows with t = t(eta))")->delimiter(',');
  bounds->add_option("--t", ba.ts, "Times in (0, 1) (rows with eta = eta~(t))")->delimiter(',');
  bounds->add_option("--lambdas", ba.lambdas, "Grid points in (0, 1]");
  bounds->add_option("--inject-t-scale", ba.t_scale, "Test mode: scale t(eta) to provoke violations")
      ->group("");

  PoolArgs po;
  auto* pool = app.add_subcommand("pool", "Pool a FEAT file into a normalized SYMMAT");
  pool->add_option("--input", po.input, "FEAT file")->required();
  pool->add_option("--op", po.op, "identity, gamma, maxexp, asinhe, sigme, hdp");
  pool->add_option("--param", po.param, "Operator parameter");
  pool->add_option("--eps", po.eps, "Regularizer");
  pool->add_option("--engine", po.engine, "elementwise, spectral or fast");
  pool->add_option("--beta", po.beta, "Centering weight in [0, 1]");
  pool->add_option("--coord-z", po.coord_z, "Pivots per coordinate (0 disables)");
  pool->add_option("--sigma", po.sigma, "Coordinate RBF bandwidth");
  pool->add_option("--alpha", po.alpha, "Coordinate weight");
  pool->add_option("--grid", po.grid, "Feature map size WxH for coordinates");
  pool->add_flag("--no-trace-normalize", po.no_trace_normalize, "Skip trace normalization");

  KappaArgs ka;
  auto* kappa = app.add_subcommand("kappa", "Support ratio and variance ratio tables");
  kappa->add_option("--j-max", ka.j_max, "Largest J");
  kappa->add_option("--n", ka.ns, "N values")->delimiter(',')->check(CLI::PositiveNumber);

  GradArgs ga;
  auto* grad = app.add_subcommand("gradcheck", "Finite-difference check of every backward pass");
  grad->add_option("--d", ga.d, "Matrix side")->check(CLI::Range(2, 64));
  grad->add_option("--seeds", ga.seeds, "Seeds per case");
  grad->add_option("--tol", ga.tol, "Largest accepted relative error");
  grad->add_option("--step", ga.step, "Finite-difference step (0 = automatic)");
  grad->add_flag("--negate", ga.negate, "Test mode: flip the analytic sign");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  std::ofstream file;
  std::ostream* sink = &out;
  if (!g.out_path.empty()) {
    file.open(g.out_path);
    if (!file) {
      err << "pnorm: cannot open " << g.out_path << " for writing\n";
      return kUsage;
    }
    sink = &file;
  }

  try {
    int code = kOk;
    if (*time) code = cmd_time(ta, g, *sink);
    if (*push) code = cmd_pushforward(pa, g, *sink);
    if (*bounds) code = cmd_bounds(ba, *sink, err);
    if (*pool) code = cmd_pool(po, *sink);
    if (*kappa) code = cmd_kappa(ka, *sink);
    if (*grad) code = cmd_gradcheck(ga, g, *sink, err);
    sink->flush();
    return code;
  } catch (const UsageError& e) {
    err << "pnorm: " << e.what() << '\n';
    return kUsage;
  } catch (const pnorm::Error& e) {
    err << "pnorm: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace pnorm::cli
