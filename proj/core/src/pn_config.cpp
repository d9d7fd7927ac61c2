#include "pnorm/pn_config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "pnorm/errors.hpp"

namespace pnorm {

std::string_view op_name(PnOp op) {
  switch (op) {
    case PnOp::Identity: return "identity";
    case PnOp::Gamma: return "gamma";
    case PnOp::MaxExp: return "maxexp";
    case PnOp::AsinhE: return "asinhe";
    case PnOp::SigmE: return "sigme";
    case PnOp::HDP: return "hdp";
  }
  return "unknown";
}

PnOp parse_op(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (PnOp op : {PnOp::Identity, PnOp::Gamma, PnOp::MaxExp, PnOp::AsinhE, PnOp::SigmE,
                  PnOp::HDP}) {
    if (lower == op_name(op)) return op;
  }
  throw DomainError("unknown operator '" + std::string(name) + "'");
}

PNConfig PNConfig::identity() { return {}; }

PNConfig PNConfig::gamma(double g, double eps) {
  PNConfig c;
  c.op = PnOp::Gamma;
  c.param = g;
  c.eps = eps;
  return c;
}

PNConfig PNConfig::maxexp(double eta, double eps) {
  PNConfig c;
  c.op = PnOp::MaxExp;
  c.param = eta;
  c.eps = eps;
  c.trace_normalize = true;
  return c;
}

PNConfig PNConfig::asinhe(double g, double eps) {
  PNConfig c;
  c.op = PnOp::AsinhE;
  c.param = g;
  c.eps = eps;
  return c;
}

PNConfig PNConfig::sigme(double eta, double eps) {
  PNConfig c;
  c.op = PnOp::SigmE;
  c.param = eta;
  c.eps = eps;
  c.trace_normalize = true;
  return c;
}

PNConfig PNConfig::hdp(double t, double eps) {
  PNConfig c;
  c.op = PnOp::HDP;
  c.param = t;
  c.eps = eps;
  return c;
}

void PNConfig::validate() const {
  auto fail = [&](const char* what) {
    std::ostringstream msg;
    msg << op_name(op) << ": " << what << " (param=" << param << ", eps=" << eps << ")";
    throw DomainError(msg.str());
  };
  if (!std::isfinite(param) || !std::isfinite(eps)) fail("non-finite setting");
  if (eps < 0.0) fail("eps must be >= 0");
  switch (op) {
    case PnOp::Identity: break;
    case PnOp::Gamma:
    case PnOp::AsinhE:
    case PnOp::HDP:
      if (!(param > 0.0)) fail("parameter must be > 0");
      break;
    case PnOp::MaxExp:
    case PnOp::SigmE:
      if (!(param >= 1.0)) fail("parameter must be >= 1");
      break;
  }
  if (residual_kappa && !(*residual_kappa > 0.0)) fail("residual kappa must be > 0");
  if (residual_gamma && !std::isfinite(*residual_gamma)) fail("residual gamma must be finite");
}

bool PNConfig::nonnegative_domain() const {
  return op == PnOp::MaxExp || op == PnOp::HDP || (op == PnOp::Gamma && !signed_gamma);
}

namespace {

[[noreturn]] void invalid(const PNConfig& cfg, double p) {
  std::ostringstream msg;
  msg.precision(17);
  msg << op_name(cfg.op) << ": invalid power normalization for p=" << p
      << " (operator undefined for p < 0)";
  throw DomainError(msg.str());
}

// MaxExp needs 1 − p ≥ 0; values a hair above 1 come from rounding.
double maxexp_base(const PNConfig& cfg, double p) {
  if (p < -cfg.eps) invalid(cfg, p);
  const double base = 1.0 - p;
  if (base < 0.0) {
    if (base < -1e-12) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "maxexp: p=" << p << " exceeds 1; normalize by the trace first";
      throw DomainError(msg.str());
    }
    return 0.0;
  }
  return base;
}

}  // namespace

double pn_scalar(const PNConfig& cfg, double p) {
  switch (cfg.op) {
    case PnOp::Identity: return p;
    case PnOp::Gamma:
      if (cfg.signed_gamma) return std::pow(std::abs(p) + cfg.eps, cfg.param);
      if (p < -cfg.eps) invalid(cfg, p);
      return std::pow(std::max(p + cfg.eps, 0.0), cfg.param);
    case PnOp::MaxExp: return 1.0 - std::pow(maxexp_base(cfg, p), cfg.param);
    case PnOp::AsinhE: return std::asinh(cfg.param * p);
    case PnOp::SigmE: return std::tanh(0.5 * cfg.param * p);
    case PnOp::HDP:
      if (p < -cfg.eps) invalid(cfg, p);
      return p > 0.0 ? std::exp(-cfg.param / p) : 0.0;
  }
  return p;
}

double pn_scalar_derivative(const PNConfig& cfg, double p) {
  switch (cfg.op) {
    case PnOp::Identity: return 1.0;
    case PnOp::Gamma: {
      if (cfg.signed_gamma) {
        const double s = p > 0.0 ? 1.0 : (p < 0.0 ? -1.0 : 0.0);
        return s * cfg.param * std::pow(std::abs(p) + cfg.eps, cfg.param - 1.0);
      }
      if (p < -cfg.eps) invalid(cfg, p);
      return cfg.param * std::pow(std::max(p + cfg.eps, 0.0), cfg.param - 1.0);
    }
    case PnOp::MaxExp:
      return cfg.param * std::pow(maxexp_base(cfg, p), cfg.param - 1.0);
    case PnOp::AsinhE: {
      const double x = cfg.param * p;
      return cfg.param / std::sqrt(1.0 + x * x);
    }
    case PnOp::SigmE: {
      const double th = std::tanh(0.5 * cfg.param * p);
      return 0.5 * cfg.param * (1.0 - th * th);
    }
    case PnOp::HDP:
      if (p < -cfg.eps) invalid(cfg, p);
      // Divide twice so a vanishing exponential never meets p² = 0.
      return p > 0.0 ? cfg.param * std::exp(-cfg.param / p) / p / p : 0.0;
  }
  return 1.0;
}

}  // namespace pnorm
