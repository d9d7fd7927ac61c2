#pragma once

#include <cstdint>
#include <random>

#include "pnorm/sym_matrix.hpp"

namespace pnorm {

// Seeded stream on std::mt19937_64, whose output sequence is fixed by the
// C++ standard. Real-valued draws use the transforms below instead of
// std::*_distribution, so sequences match across standard libraries.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Standard normal via Box-Muller (one draw per call, no caching).
  double normal();
  // Gamma(shape, 1) via Marsaglia-Tsang.
  double gamma(double shape);
  double beta(double a, double b);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

struct SpectrumLaw {
  enum class Kind { Uniform, Beta };
  Kind kind = Kind::Uniform;
  double a = 2.0;
  double b = 5.0;

  static SpectrumLaw uniform() { return {}; }
  static SpectrumLaw beta(double a, double b) { return {Kind::Beta, a, b}; }

  // Draws one eigenvalue in (0, 1].
  double draw(RngStream& rng) const;
};

// Haar-distributed orthogonal matrix (QR of a Gaussian matrix, sign-fixed).
Matrix random_orthogonal(std::size_t d, RngStream& rng);

// Q·diag(λ)·Qᵀ with λ drawn from `law` and Q from random_orthogonal.
SymMatrix random_spd(std::size_t d, const SpectrumLaw& law, RngStream& rng);

// SPD matrix with eigenvalues log-uniform in [1/cond, 1]; the extremes are
// pinned so the condition number equals `cond` for d ≥ 2.
SymMatrix random_spd_cond(std::size_t d, double cond, RngStream& rng);

}  // namespace pnorm
