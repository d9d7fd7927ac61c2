#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace pnorm {

enum class PnOp { Identity, Gamma, MaxExp, AsinhE, SigmE, HDP };

std::string_view op_name(PnOp op);
// Accepts the names printed by op_name, case-insensitive.
PnOp parse_op(std::string_view name);

// Operator selector. `param` is γ (Gamma), η (MaxExp), γ' (AsinhE),
// η' (SigmE) or t (HDP); it is ignored for Identity.
struct PNConfig {
  PnOp op = PnOp::Identity;
  double param = 1.0;
  double eps = 1e-6;
  // Divide by trace(M) + eps before applying g. On by default for MaxExp and SigmE.
  bool trace_normalize = false;
  // Gamma only: accept negative entries as (|p| + eps)^γ.
  bool signed_gamma = false;
  // Multiply the result by (trace(M) + eps)^residual_gamma.
  std::optional<double> residual_gamma;
  // Add residual_kappa·M to the result (applied before residual_gamma).
  std::optional<double> residual_kappa;

  static PNConfig identity();
  static PNConfig gamma(double g, double eps = 1e-6);
  static PNConfig maxexp(double eta, double eps = 1e-6);
  static PNConfig asinhe(double g, double eps = 1e-6);
  static PNConfig sigme(double eta, double eps = 1e-6);
  static PNConfig hdp(double t, double eps = 1e-6);

  // Throws DomainError when param, eps or the residual settings are out of range.
  void validate() const;
  // True for operators that are only defined for p ≥ 0.
  bool nonnegative_domain() const;
};

// Scalar profile g(p) and g'(p). Throws DomainError outside the operator's domain.
double pn_scalar(const PNConfig& cfg, double p);
double pn_scalar_derivative(const PNConfig& cfg, double p);

}  // namespace pnorm
