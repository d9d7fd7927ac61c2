#pragma once

#include <array>
#include <vector>

#include "pnorm/specpn.hpp"
#include "pnorm/sym_matrix.hpp"

namespace pnorm {

// Heat diffusion map λ ↦ e^{−t/λ} on the spectrum, with λ = 0 ↦ 0.
SymMatrix hdp_apply(const SymMatrix& m, double t);

// MaxExp ↔ HDP: t(η) = e/(e−1)·η^η/(η+1)^{η+1} (η ≥ 1) and its approximate
// inverse η(t) = 0.5·√(1 + 4/(t²(e−1)²)) − 0.5 (0 < t < 1).
double t_of_eta(double eta);
double eta_of_t(double t);

// Gamma ↔ HDP: γ(t) = e·t and t(γ) = γ/e.
double gamma_of_t(double t);
double t_of_gamma(double gamma);

// Gaps between MaxExp(η) and HDP(t(η)) at λ = t(η) and λ = 1/(η+1).
double eps1(double eta);
double eps2(double eta);

// Exponent of the scaled MaxExp in the fast approximation (used for 0 < t < 1,
// defined for every t > 0):
// η̃(t) = 0.5 + √(0.25 + (1/(t(e−1)) − 1/e)²).
double eta_tilde(double t);
// Touch-point parametrization of the scaled MaxExp and the derived η̄(t).
double t_scaled(double eta_bar);
double eta_bar(double t);

// Quantities of the tightly scaled MaxExp bound at one t ∈ (0, 1).
struct TightGaps {
  double t = 0.0;
  double eta_tilde = 0.0;
  double eta_bar = 0.0;
  double a = 0.0;
  double b = 0.0;
  std::array<double, 4> y{};  // y0 = t, y1 = t·η̄, y2 and y3 from Lambert-W
  double eps3 = 0.0;
  double eps4 = 0.0;
};
TightGaps tight_gaps(double t);

struct BoundReport {
  double eta = 0.0;
  double t = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
  double eps3 = 0.0;
  double eps4 = 0.0;
  std::array<double, 4> y{};
  // Largest amount by which any bound falls below the tolerance, 0 if none.
  double max_violation = 0.0;
  int violations = 0;
};

struct BoundGrid {
  std::vector<double> etas;     // rows with t = t(η)
  std::vector<double> ts;       // rows with η = η̃(t), 0 < t < 1
  std::vector<double> lambdas;  // probe points in (0, 1]
  double tolerance = -1e-12;
  // Multiplies t(η) in the η rows; anything but 1 is a deliberate fault.
  double t_scale = 1.0;

  // 50 log-spaced η in [1.01, 100], 50 t in (0, 1), 1000 λ in (0, 1].
  static BoundGrid standard();
};

// Per row checks 1−(1−λ)^η ≥ e^{−t/λ}, λ^{e·t} ≥ e^{−t/λ} and the FAHDP
// ceiling bound e^{−t}(1−(1−λ)^{⌈η̃(t)⌉}) ≥ e^{−t/λ} over the λ grid, plus
// ε1 ≤ ε2 and ε3 ≤ ε4.
std::vector<BoundReport> verify_bounds(const BoundGrid& grid);

enum class Rounding { None, CeilFloor, Round };

// e^{−t}·(𝕀 − (𝕀 − M)^{ĥ(η̃(t))}) for t < 1 and e^{−t}·M^{ĥ(t)} for t ≥ 1,
// where ĥ is ceil (t < 1) / floor (t ≥ 1), round, or the identity. Integer
// exponents use exponentiation by squaring, others the eigendecomposition.
// M must be trace-normalized.
SymMatrix fahdp_apply(const SymMatrix& m, double t, Rounding rounding = Rounding::CeilFloor);
// The scalar profile of fahdp_apply.
double fahdp_scalar(double lambda, double t, Rounding rounding = Rounding::CeilFloor);

// κ = ((J+1)N + 1)/(J+2) and κ' = 1/N.
double support_ratio(int j, int n);
double variance_ratio(int n);

}  // namespace pnorm
