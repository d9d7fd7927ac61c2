#pragma once

#include <cstddef>

#include "pnorm/feature_block.hpp"
#include "pnorm/pn_config.hpp"
#include "pnorm/sym_matrix.hpp"

namespace pnorm {

// Element-wise power normalization Ψ_kl = g(p_kl), p = M or M/(trace(M)+ε).
// Residual variants from cfg are applied afterwards: first +κ·M, then
// ×(trace(M)+ε)^γ.
SymMatrix pn_forward(const SymMatrix& m, const PNConfig& cfg);

// Exact vector-Jacobian product ∂ℓ/∂M for upstream = ∂ℓ/∂Ψ, including the
// coupling of every entry to the trace when trace normalization is on.
SymMatrix pn_backward(const SymMatrix& m, const SymMatrix& upstream, const PNConfig& cfg);

// Entry-wise slopes D_kl = ∂Ψ_kl/∂M_kl with the trace held fixed.
SymMatrix pn_slope(const SymMatrix& m, const PNConfig& cfg);

// Gradient w.r.t. the pooled block for M = (1/N)·X·Xᵀ:
// ∂ℓ/∂X = (2/N)·Sym(∂ℓ/∂M)·X. Returns the rows of X in [first_row, first_row + rows).
FeatureBlock feature_backward(const FeatureBlock& x, const SymMatrix& grad_m,
                              std::size_t first_row = 0, std::size_t rows = 0);

// MaxExp(±): (1 − q)^N − (1 − p)^N with p = max(0, p*), q = max(0, −p*).
double maxexp_pm(double p_star, int n_trials);

// Brute-force Multinomial sums. N is capped at 20.
//   multinomial_oracle: P(at least one co-occurrence in N trials) with event
//     probabilities p (co-occurrence), q, s (single occurrences).
//   multinomial_pm_oracle: signed two-event sum, equal to (1−q)^N − (1−p)^N.
constexpr int kMultinomialMaxTrials = 20;
double multinomial_oracle(double p, int n_trials, double q = 0.0, double s = 0.0);
double multinomial_pm_oracle(double p, double q, int n_trials);

enum class AlignDirection { MaxExpToSigmE, SigmEToMaxExp };

// Pairs MaxExp η with SigmE η' so both curves agree at the point of maximal
// SigmE concavity.
double sigme_maxexp_align(AlignDirection dir, double value);

}  // namespace pnorm
