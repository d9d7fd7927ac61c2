#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pnorm/sym_matrix.hpp"

namespace pnorm {

using MatrixFunction = std::function<SymMatrix(const SymMatrix&)>;

// 1e-6·(1 + ‖M‖_F).
double default_step(const SymMatrix& m);

// Central-difference gradient of ⟨upstream, f(M)⟩ over the symmetric
// perturbations E_kl = ½(J_kl + J_lk). Throws DomainError naming the probe
// if f returns non-finite values.
SymMatrix fd_vjp(const MatrixFunction& f, const SymMatrix& m, const SymMatrix& upstream,
                 double step);

// ‖analytic − numeric‖_F / max(‖numeric‖_F, 1e-12).
double grad_rel_error(const SymMatrix& analytic, const SymMatrix& numeric);

enum class GradFamily { Elementwise, Spectral, FastMaxExp, FastGammaInt };

struct GradCase {
  GradFamily family = GradFamily::Elementwise;
  std::string op = "maxexp";  // operator name for Elementwise / Spectral
  double param = 1.0;         // integer exponent for the fast families
  std::size_t d = 6;
  std::uint64_t seed = 1;
};

struct GradCheckReport {
  std::string op;
  std::size_t d = 0;
  double param = 0.0;
  std::uint64_t seed = 0;
  double max_rel_error = 0.0;
  int probe_count = 0;
  double step = 0.0;
};

struct SuiteConfig {
  std::vector<GradCase> cases;
  double step = 0.0;             // 0 selects default_step per input
  bool negate_backward = false;  // checker self-test: flips the analytic sign

  // Every operator family at d = 6 with seeds 1..5.
  static SuiteConfig standard();
};

// Seeded input for a family: positive-entry autocorrelation matrices for the
// element-wise family, SPD matrices with eigenvalues at least 0.05 apart for
// the spectral family, and unit-trace SPD matrices for the fast families.
SymMatrix gradcheck_input(GradFamily family, std::size_t d, std::uint64_t seed);
// Seeded symmetric upstream gradient with standard normal entries.
SymMatrix gradcheck_upstream(std::size_t d, std::uint64_t seed);

GradCheckReport check_case(const GradCase& c, double step = 0.0, bool negate_backward = false);

// All cases, worst error first.
std::vector<GradCheckReport> run_suite(const SuiteConfig& config);

std::string family_name(GradFamily family);

}  // namespace pnorm
