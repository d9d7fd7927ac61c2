#include "pnorm/specpn.hpp"

#include <cmath>
#include <sstream>

#include "pnorm/errors.hpp"
#include "pnorm/rng.hpp"

namespace pnorm {

void SpectralGapConfig::validate() const {
  if (!(gap > 0.0)) throw DomainError("SpectralGapConfig: gap must be > 0");
  if (max_retries < 1) throw DomainError("SpectralGapConfig: max_retries must be >= 1");
}

namespace {

// Per-eigenvalue quantities shared by the forward and backward passes.
struct Profile {
  Vector f;       // output eigenvalues
  Vector h;       // before the residual-gamma factor
  Vector dg;      // g'(q_i)
  Vector active;  // 1 where λ_i was not clamped
  Vector lam_c;   // clamped eigenvalues
  double tau = 1.0;
  double tr_eps = 1.0;
  double scale = 1.0;
  bool clamped = false;
};

Profile profile(const Vector& lambda, const PNConfig& cfg, double gap) {
  const Eigen::Index d = lambda.size();
  Profile p;
  p.f.resize(d);
  p.h.resize(d);
  p.dg.resize(d);
  p.active.setOnes(d);
  p.lam_c = lambda;

  if (cfg.nonnegative_domain()) {
    for (Eigen::Index i = 0; i < d; ++i) {
      if (lambda(i) >= 0.0) continue;
      if (lambda(i) < -gap) {
        std::ostringstream msg;
        msg.precision(17);
        msg << op_name(cfg.op) << ": eigenvalue " << lambda(i)
            << " is below -gap; the operator needs a PSD input";
        throw DomainError(msg.str());
      }
      p.lam_c(i) = 0.0;
      p.active(i) = 0.0;
      p.clamped = true;
    }
  }

  p.tr_eps = lambda.sum() + cfg.eps;
  if (cfg.trace_normalize) {
    if (!(p.tr_eps > 0.0)) throw DomainError("spectral PN: trace(M) + eps must be positive");
    p.tau = p.tr_eps;
  }
  if (cfg.residual_gamma) {
    if (!(p.tr_eps > 0.0)) throw DomainError("residual gamma needs trace(M) + eps > 0");
    p.scale = std::pow(p.tr_eps, *cfg.residual_gamma);
  }
  const double kappa = cfg.residual_kappa.value_or(0.0);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double q = p.lam_c(i) / p.tau;
    p.h(i) = pn_scalar(cfg, q) + kappa * lambda(i);
    p.dg(i) = pn_scalar_derivative(cfg, q);
    p.f(i) = p.scale * p.h(i);
  }
  return p;
}

}  // namespace

SpnResult spn_forward(const SymMatrix& m, const PNConfig& cfg, const SpectralGapConfig& gap) {
  cfg.validate();
  gap.validate();

  SpnResult out{SymMatrix(m.dim()), sym_eig(m), 0, false};
  if (gap.enabled && min_adjacent_gap(out.decomp.values) < gap.gap) {
    RngStream rng(gap.seed);
    const double d = static_cast<double>(m.dim());
    bool ok = false;
    for (int k = 1; k <= gap.max_retries && !ok; ++k) {
      Vector xi(static_cast<Eigen::Index>(m.dim()));
      for (Eigen::Index i = 0; i < xi.size(); ++i) {
        xi(i) = rng.uniform(gap.gap, gap.gap + d * gap.gap);
      }
      Matrix perturbed = m.matrix();
      perturbed.diagonal() += static_cast<double>(k) * xi;
      out.decomp = sym_eig(SymMatrix(perturbed));
      out.attempts = k;
      ok = min_adjacent_gap(out.decomp.values) >= gap.gap;
    }
    if (!ok) {
      std::ostringstream msg;
      msg << "spn_forward: spectral gap " << gap.gap << " not reached after " << gap.max_retries
          << " retries (d=" << m.dim() << ")";
      throw SpectralGapError(msg.str());
    }
  }

  const Profile p = profile(out.decomp.values, cfg, gap.gap);
  out.psi = out.decomp.reconstruct(p.f);
  out.clamped = p.clamped;
  return out;
}

SymMatrix spn_backward(const SymMatrix& upstream, const PNConfig& cfg,
                       const SpectralDecomp& decomp, double gap) {
  cfg.validate();
  if (upstream.dim() != decomp.dim()) {
    throw DimensionError("spn_backward: upstream dimension mismatch");
  }
  if (!(gap > 0.0)) throw DomainError("spn_backward: gap must be > 0");

  const Vector& lambda = decomp.values;
  const Matrix& u = decomp.vectors;
  const Eigen::Index d = lambda.size();
  const Profile p = profile(lambda, cfg, gap);
  const double kappa = cfg.residual_kappa.value_or(0.0);

  const Matrix gbar = u.transpose() * upstream.matrix() * u;

  // Eigenvector term: divided differences of f off the diagonal.
  Matrix inner = Matrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      if (i == j) continue;
      const double diff = lambda(i) - lambda(j);
      if (std::abs(diff) < 0.5 * gap) {
        std::ostringstream msg;
        msg << "spn_backward: eigenvalues " << i << " and " << j << " are " << std::abs(diff)
            << " apart, below gap/2=" << 0.5 * gap;
        throw SpectralGapError(msg.str());
      }
      inner(i, j) = gbar(i, j) * (p.f(i) - p.f(j)) / diff;
    }
  }

  // Eigenvalue term: df_i/dλ_j, split into a diagonal part and a part that
  // is the same for every j (trace coupling).
  double shared = 0.0;
  if (cfg.trace_normalize) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) acc += gbar(i, i) * p.dg(i) * p.lam_c(i);
    shared -= p.scale * acc / (p.tau * p.tau);
  }
  if (cfg.residual_gamma) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) acc += gbar(i, i) * p.h(i);
    shared += *cfg.residual_gamma * p.scale / p.tr_eps * acc;
  }
  for (Eigen::Index j = 0; j < d; ++j) {
    inner(j, j) =
        p.scale * gbar(j, j) * (p.dg(j) * p.active(j) / p.tau + kappa) + shared;
  }
  return SymMatrix(u * inner * u.transpose());
}

}  // namespace pnorm
