#include "pnorm/elempn.hpp"

#include <cmath>
#include <cstdint>

#include "pnorm/errors.hpp"

namespace pnorm {

namespace {

struct Scaling {
  double tau = 1.0;    // trace(M) + ε, or 1 without normalization
  double scale = 1.0;  // 𝒢* factor
};

Scaling scaling_of(const SymMatrix& m, const PNConfig& cfg) {
  Scaling s;
  const double tr_eps = m.trace() + cfg.eps;
  if (cfg.trace_normalize) {
    if (!(tr_eps > 0.0)) throw DomainError(std::string(op_name(cfg.op)) +
                                           ": trace(M) + eps must be positive");
    s.tau = tr_eps;
  }
  if (cfg.residual_gamma) {
    if (!(tr_eps > 0.0)) throw DomainError("residual gamma needs trace(M) + eps > 0");
    s.scale = std::pow(tr_eps, *cfg.residual_gamma);
  }
  return s;
}

template <class F>
Matrix map_entries(const Matrix& m, F f) {
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) out(i, j) = f(m(i, j));
  }
  return out;
}

}  // namespace

SymMatrix pn_forward(const SymMatrix& m, const PNConfig& cfg) {
  cfg.validate();
  const Scaling s = scaling_of(m, cfg);
  Matrix psi = map_entries(m.matrix(), [&](double v) { return pn_scalar(cfg, v / s.tau); });
  if (cfg.residual_kappa) psi += *cfg.residual_kappa * m.matrix();
  psi *= s.scale;
  return SymMatrix(psi);
}

SymMatrix pn_backward(const SymMatrix& m, const SymMatrix& upstream, const PNConfig& cfg) {
  cfg.validate();
  if (upstream.dim() != m.dim()) throw DimensionError("pn_backward: upstream dimension mismatch");
  const Scaling s = scaling_of(m, cfg);
  const Matrix& u = upstream.matrix();

  // Ψ = s·A with A = G(M) + κM.
  Matrix v = s.scale * u;
  Matrix grad = v.cwiseProduct(
      map_entries(m.matrix(), [&](double x) { return pn_scalar_derivative(cfg, x / s.tau); }));
  if (cfg.trace_normalize) {
    // p = M/τ with τ = trace(M) + ε, so every entry also moves with the diagonal.
    const double coupling = grad.cwiseProduct(m.matrix()).sum() / (s.tau * s.tau);
    grad /= s.tau;
    grad.diagonal().array() -= coupling;
  }
  if (cfg.residual_kappa) grad += *cfg.residual_kappa * v;
  if (cfg.residual_gamma) {
    Matrix a = map_entries(m.matrix(), [&](double x) { return pn_scalar(cfg, x / s.tau); });
    if (cfg.residual_kappa) a += *cfg.residual_kappa * m.matrix();
    const double tr_eps = m.trace() + cfg.eps;
    const double ds = *cfg.residual_gamma * s.scale / tr_eps;
    grad.diagonal().array() += ds * u.cwiseProduct(a).sum();
  }
  return SymMatrix(grad);
}

SymMatrix pn_slope(const SymMatrix& m, const PNConfig& cfg) {
  cfg.validate();
  const Scaling s = scaling_of(m, cfg);
  Matrix d = map_entries(m.matrix(),
                         [&](double x) { return pn_scalar_derivative(cfg, x / s.tau) / s.tau; });
  if (cfg.residual_kappa) d.array() += *cfg.residual_kappa;
  d *= s.scale;
  return SymMatrix(d);
}

FeatureBlock feature_backward(const FeatureBlock& x, const SymMatrix& grad_m,
                              std::size_t first_row, std::size_t rows) {
  if (grad_m.dim() != x.channels()) {
    throw DimensionError("feature_backward: gradient side must equal the block's channel count");
  }
  if (rows == 0) rows = x.channels() - first_row;
  if (first_row + rows > x.channels()) throw DimensionError("feature_backward: row range");
  const double n = static_cast<double>(x.count());
  Matrix full = (2.0 / n) * (grad_m.matrix() * x.matrix());
  return FeatureBlock(full.middleRows(static_cast<Eigen::Index>(first_row),
                                      static_cast<Eigen::Index>(rows)));
}

double maxexp_pm(double p_star, int n_trials) {
  if (n_trials < 1) throw DomainError("maxexp_pm: N must be >= 1");
  if (!(p_star >= -1.0 && p_star <= 1.0)) throw DomainError("maxexp_pm: p* must lie in [-1, 1]");
  const double p = std::max(0.0, p_star);
  const double q = std::max(0.0, -p_star);
  return std::pow(1.0 - q, n_trials) - std::pow(1.0 - p, n_trials);
}

namespace {

std::uint64_t binomial(int n, int k) {
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
  return r;
}

// Neumaier-compensated long double accumulator.
class Accumulator {
 public:
  void add(long double v) {
    const long double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return static_cast<double>(sum_ + comp_); }

 private:
  long double sum_ = 0.0L;
  long double comp_ = 0.0L;
};

void check_trials(int n_trials) {
  if (n_trials < 1) throw DomainError("multinomial oracle: N must be >= 1");
  if (n_trials > kMultinomialMaxTrials) {
    throw DomainError("multinomial oracle: N=" + std::to_string(n_trials) +
                      " exceeds the cap of 20");
  }
}

long double ipow(long double b, int e) {
  long double r = 1.0L;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

double multinomial_oracle(double p, int n_trials, double q, double s) {
  check_trials(n_trials);
  if (p < 0.0 || q < 0.0 || s < 0.0 || p + q + s > 1.0 + 1e-15) {
    throw DomainError("multinomial_oracle: need p, q, s >= 0 and p + q + s <= 1");
  }
  const int n = n_trials;
  const long double rest = std::max(0.0L, 1.0L - p - q - s);
  Accumulator acc;
  for (int a = 1; a <= n; ++a) {
    for (int b = 0; b <= n - a; ++b) {
      for (int c = 0; c <= n - a - b; ++c) {
        const int r = n - a - b - c;
        const std::uint64_t coef = binomial(n, a) * binomial(n - a, b) * binomial(n - a - b, c);
        acc.add(static_cast<long double>(coef) * ipow(p, a) * ipow(q, b) * ipow(s, c) *
                ipow(rest, r));
      }
    }
  }
  return acc.value();
}

double multinomial_pm_oracle(double p, double q, int n_trials) {
  check_trials(n_trials);
  if (p < 0.0 || q < 0.0 || p + q > 1.0 + 1e-15) {
    throw DomainError("multinomial_pm_oracle: need p, q >= 0 and p + q <= 1");
  }
  const int n = n_trials;
  const long double rest = std::max(0.0L, 1.0L - p - q);
  Accumulator acc;
  for (int a = 1; a <= n; ++a) {
    for (int b = 0; b <= n - a; ++b) {
      const std::uint64_t coef = binomial(n, a) * binomial(n - a, b);
      const long double diff = ipow(p, a) * ipow(q, b) - ipow(p, b) * ipow(q, a);
      acc.add(static_cast<long double>(coef) * diff * ipow(rest, n - a - b));
    }
  }
  return acc.value();
}

double sigme_maxexp_align(AlignDirection dir, double value) {
  if (!(value >= 1.0) || !std::isfinite(value)) {
    throw DomainError("sigme_maxexp_align: value must be >= 1");
  }
  const double l = std::log(std::sqrt(3.0) + 2.0);
  const double c = (4.0 - 2.0 * std::sqrt(3.0)) / 3.0;
  if (dir == AlignDirection::MaxExpToSigmE) {
    // 1 − c^{1/(2η)} loses digits for large η; expm1 keeps them.
    return l / -std::expm1(std::log(c) / (2.0 * value));
  }
  if (value <= l) throw DomainError("sigme_maxexp_align: eta' must exceed log(2 + sqrt(3))");
  return std::log(c) / (2.0 * std::log1p(-l / value));
}

}  // namespace pnorm
