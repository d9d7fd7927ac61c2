#pragma once

#include <cstddef>
#include <vector>

#include "pnorm/sym_matrix.hpp"

namespace pnorm {

// Matrix-matrix products executed by a pass.
struct MMCounter {
  int forward = 0;
  int backward = 0;
};

// Recorded state of an exponentiation-by-squaring run: the partial products
// G_1 = 𝕀, G_2, ... and the squared bases A_1, A_2 = A_1², ...
struct FastTape {
  enum class Kind { MaxExp, GammaInt };
  struct Step {
    enum class Op { Multiply, Square };
    Op op;
    std::size_t g;  // Multiply: G[g + 1] = G[g]·A[a]
    std::size_t a;  // Square:   A[a + 1] = A[a]·A[a]
  };

  Kind kind = Kind::MaxExp;
  int power = 1;
  std::vector<Matrix> g;
  std::vector<Matrix> a;
  std::vector<Step> steps;
  int mm_count_forward = 0;

  std::size_t dim() const { return a.empty() ? 0 : static_cast<std::size_t>(a[0].rows()); }
};

struct FastResult {
  SymMatrix psi;
  FastTape tape;
};

// Tolerance on |trace(M) − 1| accepted by fast_maxexp_forward.
constexpr double kTraceTolerance = 1e-8;

// 𝕀 − (𝕀 − M)^η by binary exponentiation, ⌊log₂η⌋ + popcount(η) products.
// M must have unit trace within kTraceTolerance; with `renormalize` the
// input is divided by its trace instead and the tape refers to M/trace(M).
FastResult fast_maxexp_forward(const SymMatrix& m, int eta, bool renormalize = false);

// Reverse replay of the tape: two products per multiply step and one per
// squaring. Adds the executed products to counter->backward when given.
SymMatrix fast_maxexp_backward(const FastTape& tape, const SymMatrix& upstream,
                               MMCounter* counter = nullptr);

// Σ_{n<η} Aⁿ·G·A^{η−1−n} with A = 𝕀 − M and G = upstream, folded into pairs
// plus a middle term for odd η. Linear in η; used as an independent check.
SymMatrix maxexp_closed_derivative(const SymMatrix& m, const SymMatrix& upstream, int eta);

// M^γ for integer γ ≥ 1 with the same tape structure (A_1 = M).
FastResult fast_gamma_int(const SymMatrix& m, int gamma);
SymMatrix fast_gamma_int_backward(const FastTape& tape, const SymMatrix& upstream,
                                  MMCounter* counter = nullptr);
// Σ_{n<γ} Mⁿ·G·M^{γ−1−n}, folded like maxexp_closed_derivative.
SymMatrix gamma_int_closed_derivative(const SymMatrix& m, const SymMatrix& upstream, int gamma);

// Coupled Newton-Schulz iteration for M^{1/2} on M/trace(M), rescaled by
// √trace(M) at the end; three products per iteration. Throws
// ConvergenceError when the iterates blow up.
SymMatrix newton_schulz_sqrt(const SymMatrix& m, int iters = 20, MMCounter* counter = nullptr);

}  // namespace pnorm
