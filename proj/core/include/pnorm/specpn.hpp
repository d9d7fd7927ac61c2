#pragma once

#include <cstdint>

#include "pnorm/eig.hpp"
#include "pnorm/pn_config.hpp"
#include "pnorm/sym_matrix.hpp"

namespace pnorm {

// Spectral-gap regularization. When two adjacent eigenvalues are closer than
// `gap`, attempt k = 1..max_retries decomposes M + diag(k·ξ) with fresh
// ξ_i ~ U(gap, gap + d·gap) drawn from a stream seeded with `seed`.
struct SpectralGapConfig {
  double gap = 1e-5;
  int max_retries = 10;
  std::uint64_t seed = 0;
  // Off: decompose M as given and never perturb it.
  bool enabled = true;

  static SpectralGapConfig disabled(double gap = 1e-5) {
    SpectralGapConfig c;
    c.gap = gap;
    c.enabled = false;
    return c;
  }
  void validate() const;
};

struct SpnResult {
  SymMatrix psi;
  SpectralDecomp decomp;  // decomposition of the matrix actually used
  int attempts = 0;       // regularization attempts, 0 when none were needed
  bool clamped = false;   // eigenvalues in [−gap, 0) were raised to 0
};

// Ψ = U·diag(g(p(λ)))·Uᵀ with p = λ/(trace + ε) when cfg.trace_normalize.
// Residual variants from cfg are applied in the eigenbasis. Throws
// SpectralGapError when regularization runs out of retries and DomainError
// for eigenvalues below −gap under a non-negative operator.
SpnResult spn_forward(const SymMatrix& m, const PNConfig& cfg, const SpectralGapConfig& gap = {});

// ∂ℓ/∂M for upstream = ∂ℓ/∂Ψ through the decomposition returned by
// spn_forward. Eigenvalue pairs closer than gap/2 raise SpectralGapError.
SymMatrix spn_backward(const SymMatrix& upstream, const PNConfig& cfg,
                       const SpectralDecomp& decomp, double gap = 1e-5);

}  // namespace pnorm
