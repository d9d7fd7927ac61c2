#include "pnorm/fastpn.hpp"

#include <cmath>
#include <sstream>

#include "pnorm/errors.hpp"

namespace pnorm {

namespace {

FastTape run_squaring(const Matrix& base, int power, FastTape::Kind kind) {
  FastTape tape;
  tape.kind = kind;
  tape.power = power;
  const Eigen::Index d = base.rows();
  tape.g.push_back(Matrix::Identity(d, d));
  tape.a.push_back(base);

  unsigned n = static_cast<unsigned>(power);
  while (n != 0) {
    if (n & 1u) {
      const std::size_t t = tape.g.size() - 1;
      tape.g.push_back(tape.g[t] * tape.a.back());
      tape.steps.push_back({FastTape::Step::Op::Multiply, t, tape.a.size() - 1});
      ++tape.mm_count_forward;
      n -= 1;
    }
    n /= 2;
    if (n > 0) {
      const std::size_t q = tape.a.size() - 1;
      tape.a.push_back(tape.a[q] * tape.a[q]);
      tape.steps.push_back({FastTape::Step::Op::Square, 0, q});
      ++tape.mm_count_forward;
    }
  }
  return tape;
}

// Adjoint of A_1 given the adjoint of the final G.
Matrix replay_backward(const FastTape& tape, const Matrix& g_bar_final, MMCounter* counter) {
  const Eigen::Index d = static_cast<Eigen::Index>(tape.dim());
  std::vector<Matrix> a_bar(tape.a.size(), Matrix::Zero(d, d));
  Matrix g_bar = g_bar_final;
  int count = 0;

  for (auto it = tape.steps.rbegin(); it != tape.steps.rend(); ++it) {
    if (it->op == FastTape::Step::Op::Multiply) {
      // G_{t+1} = G_t·A_q, all factors symmetric.
      a_bar[it->a] += tape.g[it->g] * g_bar;
      g_bar = g_bar * tape.a[it->a];
      count += 2;
    } else {
      // A_{q+1} = A_q², adjoint S·A + A·S with S the symmetrized adjoint.
      const Matrix s = sym(a_bar[it->a + 1]);
      const Matrix x = s * tape.a[it->a];
      a_bar[it->a] += x + x.transpose();
      count += 1;
    }
  }
  if (counter != nullptr) counter->backward += count;
  return a_bar[0];
}

void check_upstream(const FastTape& tape, const SymMatrix& upstream, const char* who) {
  if (tape.a.empty()) throw DimensionError(std::string(who) + ": empty tape");
  if (upstream.dim() != tape.dim()) {
    throw DimensionError(std::string(who) + ": upstream is " + std::to_string(upstream.dim()) +
                         "x" + std::to_string(upstream.dim()) + ", tape is " +
                         std::to_string(tape.dim()) + "x" + std::to_string(tape.dim()));
  }
}

void check_power(int power, const char* who) {
  if (power < 1) throw DomainError(std::string(who) + ": exponent must be an integer >= 1");
}

// Σ_{n<p} Aⁿ·G·A^{p−1−n}, folded into transposed pairs.
Matrix folded_power_sum(const Matrix& a, const Matrix& g, int power) {
  const Eigen::Index d = a.rows();
  std::vector<Matrix> pw(static_cast<std::size_t>(power));
  pw[0] = Matrix::Identity(d, d);
  for (int i = 1; i < power; ++i) pw[static_cast<std::size_t>(i)] = pw[static_cast<std::size_t>(i - 1)] * a;

  Matrix half = Matrix::Zero(d, d);
  for (int n = 0; n < power / 2; ++n) {
    half += pw[static_cast<std::size_t>(n)] * g * pw[static_cast<std::size_t>(power - 1 - n)];
  }
  Matrix out = half + half.transpose();
  if (power % 2 == 1) {
    const Matrix& mid = pw[static_cast<std::size_t>(power / 2)];
    out += mid * g * mid;
  }
  return out;
}

}  // namespace

FastResult fast_maxexp_forward(const SymMatrix& m, int eta, bool renormalize) {
  check_power(eta, "fast_maxexp_forward");
  const double tr = m.trace();
  Matrix mm = m.matrix();
  if (std::abs(tr - 1.0) > kTraceTolerance) {
    if (!renormalize) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "fast_maxexp_forward: trace(M)=" << tr << " is not 1 within " << kTraceTolerance;
      throw DomainError(msg.str());
    }
    if (!(tr > 0.0)) throw DomainError("fast_maxexp_forward: cannot renormalize, trace <= 0");
    mm /= tr;
  }
  const Eigen::Index d = mm.rows();
  FastTape tape = run_squaring(Matrix::Identity(d, d) - mm, eta, FastTape::Kind::MaxExp);
  // η = 1 returns the input itself rather than 𝕀 − (𝕀 − M) with its rounding.
  SymMatrix psi = eta == 1 ? SymMatrix(mm) : SymMatrix(Matrix(Matrix::Identity(d, d) - tape.g.back()));
  return {std::move(psi), std::move(tape)};
}

SymMatrix fast_maxexp_backward(const FastTape& tape, const SymMatrix& upstream,
                               MMCounter* counter) {
  check_upstream(tape, upstream, "fast_maxexp_backward");
  if (tape.kind != FastTape::Kind::MaxExp) {
    throw DomainError("fast_maxexp_backward: tape was recorded by fast_gamma_int");
  }
  // Ψ = 𝕀 − G_T and A_1 = 𝕀 − M: both signs flip.
  const Matrix a1_bar = replay_backward(tape, -upstream.matrix(), counter);
  return SymMatrix(Matrix(-a1_bar));
}

SymMatrix maxexp_closed_derivative(const SymMatrix& m, const SymMatrix& upstream, int eta) {
  check_power(eta, "maxexp_closed_derivative");
  if (upstream.dim() != m.dim()) throw DimensionError("maxexp_closed_derivative: dimension mismatch");
  const Eigen::Index d = static_cast<Eigen::Index>(m.dim());
  const Matrix a = Matrix::Identity(d, d) - m.matrix();
  return SymMatrix(folded_power_sum(a, upstream.matrix(), eta));
}

FastResult fast_gamma_int(const SymMatrix& m, int gamma) {
  check_power(gamma, "fast_gamma_int");
  FastTape tape = run_squaring(m.matrix(), gamma, FastTape::Kind::GammaInt);
  SymMatrix psi(tape.g.back());
  return {std::move(psi), std::move(tape)};
}

SymMatrix fast_gamma_int_backward(const FastTape& tape, const SymMatrix& upstream,
                                  MMCounter* counter) {
  check_upstream(tape, upstream, "fast_gamma_int_backward");
  if (tape.kind != FastTape::Kind::GammaInt) {
    throw DomainError("fast_gamma_int_backward: tape was recorded by fast_maxexp_forward");
  }
  return SymMatrix(replay_backward(tape, upstream.matrix(), counter));
}

SymMatrix gamma_int_closed_derivative(const SymMatrix& m, const SymMatrix& upstream, int gamma) {
  check_power(gamma, "gamma_int_closed_derivative");
  if (upstream.dim() != m.dim()) throw DimensionError("gamma_int_closed_derivative: dimension mismatch");
  return SymMatrix(folded_power_sum(m.matrix(), upstream.matrix(), gamma));
}

SymMatrix newton_schulz_sqrt(const SymMatrix& m, int iters, MMCounter* counter) {
  if (iters < 1) throw DomainError("newton_schulz_sqrt: iters must be >= 1");
  if (!m.is_finite()) throw DomainError("newton_schulz_sqrt: non-finite input");
  const double tr = m.trace();
  if (!(tr > 0.0)) throw DomainError("newton_schulz_sqrt: trace must be positive for an SPD input");

  const Eigen::Index d = static_cast<Eigen::Index>(m.dim());
  const Matrix eye = Matrix::Identity(d, d);
  Matrix y = m.matrix() / tr;
  Matrix z = eye;
  // Converged iterates satisfy ‖Y‖_F ≤ √d; anything far beyond that is divergence.
  const double limit = 1e3 * std::sqrt(static_cast<double>(d));
  for (int k = 0; k < iters; ++k) {
    const Matrix t = 0.5 * (3.0 * eye - z * y);
    y = y * t;
    z = t * z;
    if (counter != nullptr) counter->forward += 3;
    const double ny = y.norm();
    if (!std::isfinite(ny) || ny > limit || !std::isfinite(z.norm())) {
      std::ostringstream msg;
      msg << "newton_schulz_sqrt: iterates diverged at step " << k + 1 << " (||Y||_F=" << ny
          << "); the input is likely indefinite or too ill-conditioned";
      throw ConvergenceError(msg.str());
    }
  }
  return SymMatrix(Matrix(y * std::sqrt(tr)));
}

}  // namespace pnorm
