#include "pnorm/hdp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pnorm/errors.hpp"
#include "pnorm/fastpn.hpp"
#include "pnorm/lambert.hpp"
#include "pnorm/pn_config.hpp"

namespace pnorm {

namespace {

constexpr double kE = std::numbers::e;

[[noreturn]] void domain(const char* who, const char* what, double v) {
  std::ostringstream msg;
  msg.precision(17);
  msg << who << ": " << what << " (got " << v << ")";
  throw DomainError(msg.str());
}

void check_time(const char* who, double t) {
  if (!(t > 0.0 && t < 1.0)) domain(who, "t must lie in (0, 1)", t);
}

double apply_rounding(double x, double t, Rounding r) {
  switch (r) {
    case Rounding::None: return x;
    case Rounding::CeilFloor: return t < 1.0 ? std::ceil(x) : std::floor(x);
    case Rounding::Round: return std::round(x);
  }
  return x;
}

}  // namespace

SymMatrix hdp_apply(const SymMatrix& m, double t) {
  if (!(t > 0.0)) domain("hdp_apply", "t must be > 0", t);
  return spn_forward(m, PNConfig::hdp(t), SpectralGapConfig::disabled()).psi;
}

double t_of_eta(double eta) {
  if (!(eta >= 1.0) || !std::isfinite(eta)) domain("t_of_eta", "eta must be >= 1", eta);
  return kE / (kE - 1.0) * std::exp(eta * std::log(eta) - (eta + 1.0) * std::log1p(eta));
}

double eta_of_t(double t) {
  check_time("eta_of_t", t);
  const double c = t * (kE - 1.0);
  return 0.5 * std::sqrt(1.0 + 4.0 / (c * c)) - 0.5;
}

double gamma_of_t(double t) {
  if (!(t > 0.0)) domain("gamma_of_t", "t must be > 0", t);
  return kE * t;
}

double t_of_gamma(double gamma) {
  if (!(gamma > 0.0)) domain("t_of_gamma", "gamma must be > 0", gamma);
  return gamma / kE;
}

double eps1(double eta) {
  return (kE - 1.0) / kE - std::pow(1.0 - t_of_eta(eta), eta);
}

double eps2(double eta) {
  if (!(eta >= 1.0)) domain("eps2", "eta must be >= 1", eta);
  const double r = std::pow(eta / (eta + 1.0), eta);
  return 1.0 - r - std::exp(-kE / (kE - 1.0) * r);
}

double eta_tilde(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) domain("eta_tilde", "t must be positive", t);
  const double c = 1.0 / (t * (kE - 1.0)) - 1.0 / kE;
  return 0.5 + std::sqrt(0.25 + c * c);
}

double t_scaled(double eta_bar) {
  if (!(eta_bar >= 1.0)) domain("t_scaled", "eta must be >= 1", eta_bar);
  if (eta_bar == 1.0) return kE / (2.0 * (kE - 1.0));
  const double r = std::pow((eta_bar - 1.0) / eta_bar, eta_bar);
  return kE / (kE - 1.0) * r / (r + eta_bar - 1.0);
}

double eta_bar(double t) {
  check_time("eta_bar", t);
  const double inner = 2.0 * t - t_scaled(eta_tilde(t));
  if (!(inner > 0.0)) domain("eta_bar", "2t - t(eta~(t)) must be positive", inner);
  return eta_tilde(inner);
}

TightGaps tight_gaps(double t) {
  check_time("tight_gaps", t);
  TightGaps g;
  g.t = t;
  g.eta_tilde = eta_tilde(t);
  g.eta_bar = eta_bar(t);
  if (!(g.eta_bar > 1.0)) domain("tight_gaps", "eta_bar(t) must exceed 1", t);

  const double et = std::exp(-t);
  const double r = std::pow((g.eta_bar - 1.0) / g.eta_bar, g.eta_tilde);
  g.a = et / t * r / (1.0 - g.eta_bar);
  g.b = et * (1.0 - r / (1.0 - g.eta_bar));

  const double ba = g.b / g.a;
  const double z = std::exp(ba) / g.a;
  g.y[0] = t;
  g.y[1] = t * g.eta_bar;
  g.y[2] = lambert_w(-1, z) - ba;
  g.y[3] = lambert_w(0, z) - ba;

  g.eps3 = et - et * r - std::exp(-t * g.eta_bar);
  const double y3 = g.y[3];
  g.eps4 = et - et * std::pow((y3 - t) / y3, g.eta_tilde) - std::exp(-y3);
  return g;
}

BoundGrid BoundGrid::standard() {
  BoundGrid g;
  const int rows = 50;
  for (int i = 0; i < rows; ++i) {
    const double f = static_cast<double>(i) / (rows - 1);
    g.etas.push_back(1.01 * std::pow(100.0 / 1.01, f));
    g.ts.push_back((i + 0.5) / rows);
  }
  const int probes = 1000;
  for (int i = 1; i <= probes; ++i) g.lambdas.push_back(static_cast<double>(i) / probes);
  return g;
}

namespace {

struct Margin {
  double worst = 0.0;
  int count = 0;
  double tolerance = -1e-12;

  void check(double gap) {
    if (std::isnan(gap) || gap < tolerance) {
      ++count;
      worst = std::max(worst, std::isnan(gap) ? INFINITY : tolerance - gap);
    }
  }
};

BoundReport make_row(double eta, double t, double t_fahdp, const BoundGrid& grid) {
  BoundReport row;
  row.eta = eta;
  row.t = t;
  // Gaps at the probe points λ = t and λ = 1/(η+1), evaluated for the row's t.
  // With t = t(η) these are exactly eps1(η) and eps2(η).
  row.eps1 = 1.0 - std::pow(1.0 - t, eta) - std::exp(-1.0);
  row.eps2 = 1.0 - std::pow(eta / (eta + 1.0), eta) - std::exp(-t * (eta + 1.0));
  Margin m;
  m.tolerance = grid.tolerance;
  m.check(row.eps2 - row.eps1);

  if (t_fahdp > 0.0 && t_fahdp < 1.0) {
    const TightGaps g = tight_gaps(t_fahdp);
    row.eps3 = g.eps3;
    row.eps4 = g.eps4;
    row.y = g.y;
    m.check(row.eps4 - row.eps3);
    m.check(g.y[1] - g.y[2]);
    m.check(g.y[3] - g.y[1]);
  }

  const double gamma = gamma_of_t(t_fahdp);
  for (double lam : grid.lambdas) {
    m.check(1.0 - std::pow(1.0 - lam, eta) - std::exp(-t / lam));
    m.check(std::pow(lam, gamma) - std::exp(-t_fahdp / lam));
    m.check(fahdp_scalar(lam, t_fahdp) - std::exp(-t_fahdp / lam));
  }
  row.max_violation = m.worst;
  row.violations = m.count;
  return row;
}

}  // namespace

std::vector<BoundReport> verify_bounds(const BoundGrid& grid) {
  for (double lam : grid.lambdas) {
    if (!(lam > 0.0 && lam <= 1.0)) domain("verify_bounds", "lambda grid must lie in (0, 1]", lam);
  }
  std::vector<BoundReport> out;
  out.reserve(grid.etas.size() + grid.ts.size());
  for (double eta : grid.etas) {
    const double t = grid.t_scale * t_of_eta(eta);
    out.push_back(make_row(eta, t, t, grid));
  }
  for (double t : grid.ts) {
    check_time("verify_bounds", t);
    const double eta = eta_tilde(t);
    out.push_back(make_row(eta, t_of_eta(eta), t, grid));
  }
  return out;
}

double fahdp_scalar(double lambda, double t, Rounding rounding) {
  if (!(t > 0.0)) domain("fahdp", "t must be > 0", t);
  const double scale = std::exp(-t);
  const double lam = std::clamp(lambda, 0.0, 1.0);
  if (t < 1.0) {
    const double eta = apply_rounding(eta_tilde(t), t, rounding);
    return scale * (1.0 - std::pow(1.0 - lam, eta));
  }
  return scale * std::pow(lam, apply_rounding(t, t, rounding));
}

SymMatrix fahdp_apply(const SymMatrix& m, double t, Rounding rounding) {
  if (!(t > 0.0)) domain("fahdp_apply", "t must be > 0", t);
  const double scale = std::exp(-t);
  const bool time_reversed = t < 1.0;
  const double power = apply_rounding(time_reversed ? eta_tilde(t) : t, t, rounding);
  const bool integral = power == std::floor(power) && power >= 1.0 && power < 1 << 30;

  SymMatrix out(m.dim());
  if (time_reversed) {
    if (integral) {
      out = fast_maxexp_forward(m, static_cast<int>(power)).psi;
    } else {
      if (std::abs(m.trace() - 1.0) > kTraceTolerance) {
        domain("fahdp_apply", "M must be trace-normalized", m.trace());
      }
      PNConfig cfg = PNConfig::maxexp(power, 0.0);
      cfg.trace_normalize = false;
      out = spn_forward(m, cfg, SpectralGapConfig::disabled()).psi;
    }
  } else if (integral) {
    out = fast_gamma_int(m, static_cast<int>(power)).psi;
  } else {
    out = spn_forward(m, PNConfig::gamma(power, 0.0), SpectralGapConfig::disabled()).psi;
  }
  return out * scale;
}

double support_ratio(int j, int n) {
  if (j < 0) domain("support_ratio", "J must be >= 0", j);
  if (n < 1) domain("support_ratio", "N must be >= 1", n);
  return (static_cast<double>(j + 1) * n + 1.0) / (j + 2.0);
}

double variance_ratio(int n) {
  if (n < 1) domain("variance_ratio", "N must be >= 1", n);
  return 1.0 / n;
}

}  // namespace pnorm
