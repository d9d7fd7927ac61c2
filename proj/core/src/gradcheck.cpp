#include "pnorm/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pnorm/elempn.hpp"
#include "pnorm/errors.hpp"
#include "pnorm/fastpn.hpp"
#include "pnorm/rng.hpp"
#include "pnorm/sop.hpp"
#include "pnorm/specpn.hpp"

namespace pnorm {

double default_step(const SymMatrix& m) { return 1e-6 * (1.0 + m.norm()); }

SymMatrix fd_vjp(const MatrixFunction& f, const SymMatrix& m, const SymMatrix& upstream,
                 double step) {
  if (!(step > 0.0)) throw DomainError("fd_vjp: step must be > 0");
  if (upstream.dim() != m.dim()) throw DimensionError("fd_vjp: upstream dimension mismatch");
  const std::size_t d = m.dim();
  SymMatrix grad(d);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t l = k; l < d; ++l) {
      Matrix e = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
      e(k, l) += 0.5 * step;
      e(l, k) += 0.5 * step;
      const SymMatrix plus = f(SymMatrix(Matrix(m.matrix() + e)));
      const SymMatrix minus = f(SymMatrix(Matrix(m.matrix() - e)));
      if (!plus.is_finite() || !minus.is_finite()) {
        std::ostringstream msg;
        msg << "fd_vjp: forward returned non-finite values at probe (" << k << "," << l << ")";
        throw DomainError(msg.str());
      }
      grad.set(k, l, (inner(upstream, plus) - inner(upstream, minus)) / (2.0 * step));
    }
  }
  return grad;
}

double grad_rel_error(const SymMatrix& analytic, const SymMatrix& numeric) {
  return (analytic.matrix() - numeric.matrix()).norm() / std::max(numeric.norm(), 1e-12);
}

std::string family_name(GradFamily family) {
  switch (family) {
    case GradFamily::Elementwise: return "elementwise";
    case GradFamily::Spectral: return "spectral";
    case GradFamily::FastMaxExp: return "fast";
    case GradFamily::FastGammaInt: return "fast";
  }
  return "unknown";
}

SymMatrix gradcheck_input(GradFamily family, std::size_t d, std::uint64_t seed) {
  RngStream rng(seed);
  switch (family) {
    case GradFamily::Elementwise: {
      FeatureBlock f(d, 2 * d);
      for (std::size_t n = 0; n < f.count(); ++n) {
        for (std::size_t k = 0; k < d; ++k) f(k, n) = rng.uniform(0.2, 1.0);
      }
      return autocorrelation(f);
    }
    case GradFamily::Spectral: {
      Vector lambda(static_cast<Eigen::Index>(d));
      for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        lambda(i) = 0.1 + 0.9 * (static_cast<double>(i) + 0.25 * rng.uniform()) /
                              static_cast<double>(d);
      }
      const Matrix q = random_orthogonal(d, rng);
      return SymMatrix(q * lambda.asDiagonal() * q.transpose());
    }
    case GradFamily::FastMaxExp:
    case GradFamily::FastGammaInt:
      return trace_normalized(random_spd(d, SpectrumLaw::uniform(), rng));
  }
  return SymMatrix(d);
}

SymMatrix gradcheck_upstream(std::size_t d, std::uint64_t seed) {
  RngStream rng(seed ^ 0x9e3779b97f4a7c15ULL);
  Matrix g(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = rng.normal();
  }
  return SymMatrix(g);
}

namespace {

PNConfig config_for(const std::string& op, double param) {
  switch (parse_op(op)) {
    case PnOp::Identity: return PNConfig::identity();
    case PnOp::Gamma: return PNConfig::gamma(param);
    case PnOp::MaxExp: return PNConfig::maxexp(param);
    case PnOp::AsinhE: return PNConfig::asinhe(param);
    case PnOp::SigmE: return PNConfig::sigme(param);
    case PnOp::HDP: return PNConfig::hdp(param);
  }
  return PNConfig::identity();
}

int integer_param(const GradCase& c) {
  const double r = std::round(c.param);
  if (r < 1.0 || r != c.param) throw DomainError("gradcheck: fast families need an integer >= 1");
  return static_cast<int>(r);
}

}  // namespace

GradCheckReport check_case(const GradCase& c, double step, bool negate_backward) {
  const SymMatrix m = gradcheck_input(c.family, c.d, c.seed);
  const SymMatrix up = gradcheck_upstream(c.d, c.seed);
  if (step <= 0.0) step = default_step(m);

  MatrixFunction forward;
  SymMatrix analytic(c.d);
  std::string op_label = c.op;
  switch (c.family) {
    case GradFamily::Elementwise: {
      const PNConfig cfg = config_for(c.op, c.param);
      forward = [cfg](const SymMatrix& x) { return pn_forward(x, cfg); };
      analytic = pn_backward(m, up, cfg);
      break;
    }
    case GradFamily::Spectral: {
      const PNConfig cfg = config_for(c.op, c.param);
      const auto gap = SpectralGapConfig::disabled();
      forward = [cfg, gap](const SymMatrix& x) { return spn_forward(x, cfg, gap).psi; };
      analytic = spn_backward(up, cfg, spn_forward(m, cfg, gap).decomp);
      break;
    }
    case GradFamily::FastMaxExp: {
      const int eta = integer_param(c);
      op_label = "maxexp";
      // Probes leave the unit-trace set, so the reference forward is the
      // plain polynomial 𝕀 − (𝕀 − X)^η without the trace check.
      forward = [eta](const SymMatrix& x) {
        const SymMatrix eye = SymMatrix::identity(x.dim());
        return eye - fast_gamma_int(eye - x, eta).psi;
      };
      analytic = fast_maxexp_backward(fast_maxexp_forward(m, eta).tape, up);
      break;
    }
    case GradFamily::FastGammaInt: {
      const int gamma = integer_param(c);
      op_label = "gamma";
      forward = [gamma](const SymMatrix& x) { return fast_gamma_int(x, gamma).psi; };
      analytic = fast_gamma_int_backward(fast_gamma_int(m, gamma).tape, up);
      break;
    }
  }
  if (negate_backward) analytic *= -1.0;

  const SymMatrix numeric = fd_vjp(forward, m, up, step);
  GradCheckReport r;
  r.op = family_name(c.family) + "/" + op_label;
  r.d = c.d;
  r.param = c.param;
  r.seed = c.seed;
  r.max_rel_error = grad_rel_error(analytic, numeric);
  r.probe_count = static_cast<int>(c.d * (c.d + 1));
  r.step = step;
  return r;
}

SuiteConfig SuiteConfig::standard() {
  SuiteConfig cfg;
  const std::vector<std::pair<std::string, double>> ops = {
      {"gamma", 0.5}, {"maxexp", 3.0}, {"sigme", 2.0}, {"asinhe", 1.5}, {"hdp", 0.3}};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (const auto& [op, param] : ops) {
      cfg.cases.push_back({GradFamily::Elementwise, op, param, 6, seed});
      cfg.cases.push_back({GradFamily::Spectral, op, param, 6, seed});
    }
    for (double eta : {2.0, 3.0, 7.0, 50.0}) {
      cfg.cases.push_back({GradFamily::FastMaxExp, "maxexp", eta, 6, seed});
    }
    for (double gamma : {2.0, 3.0, 5.0}) {
      cfg.cases.push_back({GradFamily::FastGammaInt, "gamma", gamma, 6, seed});
    }
  }
  return cfg;
}

std::vector<GradCheckReport> run_suite(const SuiteConfig& config) {
  std::vector<GradCheckReport> out;
  out.reserve(config.cases.size());
  for (const auto& c : config.cases) out.push_back(check_case(c, config.step, config.negate_backward));
  std::stable_sort(out.begin(), out.end(), [](const GradCheckReport& a, const GradCheckReport& b) {
    return a.max_rel_error > b.max_rel_error;
  });
  return out;
}

}  // namespace pnorm
