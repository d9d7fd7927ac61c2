#include <cmath>

#include <gtest/gtest.h>

#include "pnorm/eig.hpp"
#include "pnorm/errors.hpp"
#include "pnorm/fastpn.hpp"
#include "pnorm/hdp.hpp"
#include "pnorm/rng.hpp"
#include "pnorm/specpn.hpp"
#include "test_util.hpp"

namespace pnorm {
namespace {

const double kE = std::exp(1.0);

std::vector<double> lambda_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 1000; ++i) g.push_back(i / 1000.0);
  return g;
}

TEST(HdpApply, ScalarAndLimit) {
  EXPECT_DOUBLE_EQ(hdp_apply(SymMatrix::identity(1), 0.4)(0, 0), std::exp(-0.4));
  // Small t sends every positive eigenvalue towards 1, zero stays at zero.
  Vector v(3);
  v << 0.6, 0.4, 0.0;
  const SymMatrix m = testing::with_spectrum(v, 2);
  const auto e = sym_eig(hdp_apply(m, 1e-4)).values;
  EXPECT_NEAR(e(0), 1.0, 1e-3);
  EXPECT_NEAR(e(1), 1.0, 1e-3);
  EXPECT_NEAR(e(2), 0.0, 1e-12);
  EXPECT_THROW(hdp_apply(m, 0.0), DomainError);
}

TEST(HdpApply, SharesTheSpectralPath) {
  RngStream rng(8);
  const SymMatrix m = random_spd(8, SpectrumLaw::uniform(), rng);
  PNConfig cfg = PNConfig::hdp(0.3);
  cfg.trace_normalize = false;
  EXPECT_EQ(hdp_apply(m, 0.3), spn_forward(m, cfg, SpectralGapConfig::disabled()).psi);
}

TEST(Parametrization, TOfEta) {
  EXPECT_NEAR(t_of_eta(1.0), kE / (4 * (kE - 1)), 1e-15);
  EXPECT_NEAR(t_of_eta(1.0), 0.39551, 2e-5);
  for (double eta = 1.0; eta < 1000.0; eta *= 1.3) {
    const double direct = kE / (kE - 1) * std::pow(eta, eta) / std::pow(eta + 1, eta + 1);
    if (std::isfinite(direct) && direct > 0) EXPECT_NEAR(t_of_eta(eta), direct, 1e-12 * direct);
    EXPECT_GT(t_of_eta(eta), t_of_eta(eta * 1.3));
  }
  EXPECT_NEAR(t_of_eta(1e6) * (1e6 + 1), 1.0 / (kE - 1), 1e-6);
  EXPECT_THROW(t_of_eta(0.5), DomainError);
}

TEST(Parametrization, ApproximateInverse) {
  for (double eta = 10; eta <= 100; eta += 1.0) {
    EXPECT_LE(std::abs(eta_of_t(t_of_eta(eta)) - eta) / eta, 0.05) << eta;
  }
  EXPECT_THROW(eta_of_t(0.0), DomainError);
  EXPECT_THROW(eta_of_t(1.0), DomainError);
}

TEST(Parametrization, GammaLinearMaps) {
  EXPECT_DOUBLE_EQ(gamma_of_t(1.0 / kE), 1.0);
  EXPECT_DOUBLE_EQ(t_of_gamma(kE), 1.0);
  RngStream rng(3);
  for (int i = 0; i < 100; ++i) {
    const double t = rng.uniform(0.01, 5.0);
    EXPECT_NEAR(t_of_gamma(gamma_of_t(t)), t, 4 * std::numeric_limits<double>::epsilon() * t);
  }
  EXPECT_THROW(gamma_of_t(0.0), DomainError);
  EXPECT_THROW(t_of_gamma(-1.0), DomainError);
}

TEST(Gaps, Eps2AtOne) {
  EXPECT_NEAR(eps2(1.0), 1.0 - 0.5 - std::exp(-kE / (2 * (kE - 1))), 1e-15);
}

TEST(Gaps, Eps1BelowEps2) {
  for (double eta : {1.5, 2.0, 5.0, 10.0, 50.0, 100.0}) {
    // Direct evaluation of both gap formulas.
    const double t = t_of_eta(eta);
    const double e1 = (kE - 1) / kE - std::pow(1 - t, eta);
    const double r = std::pow(eta / (eta + 1), eta);
    const double e2 = 1 - r - std::exp(-kE / (kE - 1) * r);
    EXPECT_NEAR(eps1(eta), e1, 1e-14);
    EXPECT_NEAR(eps2(eta), e2, 1e-14);
    EXPECT_LE(eps1(eta), eps2(eta)) << eta;
  }
}

TEST(Gaps, EtaTildeFormula) {
  for (double t = 0.05; t < 1.0; t += 0.05) {
    const double inner_term = 1 / (t * (kE - 1)) - 1 / kE;
    EXPECT_NEAR(eta_tilde(t), 0.5 + std::sqrt(0.25 + inner_term * inner_term), 1e-14);
    EXPECT_GE(eta_tilde(t), 1.0);
  }
}

TEST(Gaps, TightGapProbePoints) {
  for (int i = 1; i < 1000; ++i) {
    const double t = i / 1000.0;
    const TightGaps g = tight_gaps(t);
    EXPECT_NEAR(g.y[2], g.y[0], 1e-9 * t) << t;
    EXPECT_DOUBLE_EQ(g.y[0], t);
    EXPECT_LE(g.y[2], g.y[1] * (1 + 1e-12));
    EXPECT_LE(g.y[1], g.y[3] * (1 + 1e-12));
    EXPECT_LE(g.eps3, g.eps4 + 1e-12) << t;
    // y2 and y3 solve a·y + b = e^{−y}.
    for (int k : {2, 3}) {
      EXPECT_NEAR(g.a * g.y[k] + g.b, std::exp(-g.y[k]), 1e-10) << t;
    }
  }
}

TEST(Bounds, MaxExpBoundAtEtaTwo) {
  const double t = t_of_eta(2.0);
  int violations = 0;
  for (double l : lambda_grid()) {
    if (1 - std::pow(1 - l, 2.0) - std::exp(-t / l) < -1e-12) ++violations;
  }
  EXPECT_EQ(violations, 0);
  BoundGrid g;
  g.etas = {2.0};
  g.lambdas = lambda_grid();
  const auto rep = verify_bounds(g);
  ASSERT_EQ(rep.size(), 1u);
  EXPECT_EQ(rep[0].violations, 0);
}

TEST(Bounds, StandardGridHasNoViolations) {
  const auto rep = verify_bounds(BoundGrid::standard());
  EXPECT_EQ(rep.size(), 100u);
  for (const auto& r : rep) {
    EXPECT_EQ(r.violations, 0) << "eta " << r.eta << " t " << r.t;
    EXPECT_EQ(r.max_violation, 0.0);
  }
}

TEST(Bounds, RowGapsMatchClosedForms) {
  BoundGrid g = BoundGrid::standard();
  g.ts.clear();
  for (const auto& r : verify_bounds(g)) {
    EXPECT_NEAR(r.eps1, eps1(r.eta), 1e-12) << r.eta;
    EXPECT_NEAR(r.eps2, eps2(r.eta), 1e-12) << r.eta;
  }
}

TEST(Bounds, ScaledTIsCaught) {
  // Too small a t breaks the MaxExp bound; too large a t breaks eps1 <= eps2.
  for (double scale : {0.5, 1.5}) {
    BoundGrid g = BoundGrid::standard();
    g.ts.clear();
    g.t_scale = scale;
    int bad = 0;
    for (const auto& r : verify_bounds(g)) bad += r.violations > 0;
    EXPECT_GT(bad, 0) << scale;
  }
}

TEST(Bounds, GammaBoundTouches) {
  for (double t : {0.1, 0.3, 0.5, 0.9}) {
    double lowest = 1e300;
    for (double l : lambda_grid()) {
      const double gap = std::pow(l, kE * t) - std::exp(-t / l);
      EXPECT_GE(gap, -1e-12);
      lowest = std::min(lowest, gap);
    }
    EXPECT_LT(lowest, 1e-3) << t;
  }
}

TEST(Fahdp, IntegerGammaOnDiagonal) {
  Vector v(3);
  v << 0.5, 0.3, 0.2;
  const SymMatrix out = fahdp_apply(SymMatrix::diagonal(v), 2.0);
  for (Eigen::Index i = 0; i < 3; ++i) {
    EXPECT_NEAR(out(static_cast<std::size_t>(i), static_cast<std::size_t>(i)), std::exp(-2.0) * v(i) * v(i), 1e-16);
  }
}

TEST(Fahdp, MatchesHdpAtUnitEigenvalue) {
  for (double t : {0.1, 0.3, 0.7, 1.0, 2.0, 3.5}) {
    for (Rounding r : {Rounding::None, Rounding::CeilFloor, Rounding::Round}) {
      EXPECT_NEAR(fahdp_scalar(1.0, t, r), std::exp(-t), 1e-15);
    }
  }
}

TEST(Fahdp, CeilingUpperBound) {
  for (double t : {0.1, 0.3, 0.7}) {
    const double n = std::ceil(eta_tilde(t));
    for (double l : lambda_grid()) {
      const double want = std::exp(-t) * (1 - std::pow(1 - l, n));
      EXPECT_NEAR(fahdp_scalar(l, t), want, 1e-14);
      EXPECT_GE(want - std::exp(-t / l), -1e-12) << t << " " << l;
    }
  }
}

TEST(Fahdp, UnroundedUpperBoundsHdpEigenvalueWise) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    RngStream rng(seed);
    const SymMatrix m = trace_normalized(random_spd(6, SpectrumLaw::beta(2, 5), rng));
    for (double t : {0.05, 0.2, 0.6, 0.95}) {
      const auto lam = sym_eig(m);
      const Matrix u = lam.vectors;
      const Vector f = (u.transpose() * fahdp_apply(m, t, Rounding::None).matrix() * u).diagonal();
      const Vector h = (u.transpose() * hdp_apply(m, t).matrix() * u).diagonal();
      for (Eigen::Index i = 0; i < f.size(); ++i) EXPECT_GE(f(i) - h(i), -1e-12) << t;
    }
  }
}

TEST(Fahdp, FastPathAgreesWithSpectral) {
  RngStream rng(4);
  const SymMatrix m = trace_normalized(random_spd(8, SpectrumLaw::uniform(), rng));
  const double t = 0.3;
  const int n = static_cast<int>(std::ceil(eta_tilde(t)));
  const SymMatrix want(std::exp(-t) * fast_maxexp_forward(m, n).psi.matrix());
  EXPECT_LE(rel_frobenius(fahdp_apply(m, t), want), 1e-14);
  PNConfig mx = PNConfig::maxexp(eta_tilde(t), 0.0);
  mx.trace_normalize = false;
  const SymMatrix none(std::exp(-t) * spn_forward(m, mx, SpectralGapConfig::disabled()).psi.matrix());
  EXPECT_LE(rel_frobenius(fahdp_apply(m, t, Rounding::None), none), 1e-12);
  EXPECT_THROW(fahdp_apply(SymMatrix(2.0 * m.matrix()), t), DomainError);
}

TEST(SupportRatio, ExamplesAndMonotonicity) {
  EXPECT_DOUBLE_EQ(support_ratio(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(support_ratio(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(support_ratio(3, 4), (4.0 * 4 + 1) / 5.0);
  for (int n = 2; n <= 50; ++n) {
    for (int j = 0; j < 30; ++j) {
      EXPECT_GT(support_ratio(j + 1, n), support_ratio(j, n));
      EXPECT_GT(support_ratio(j, n + 1), support_ratio(j, n));
    }
  }
  EXPECT_DOUBLE_EQ(variance_ratio(4), 0.25);
  EXPECT_THROW(support_ratio(-1, 2), DomainError);
  EXPECT_THROW(variance_ratio(0), DomainError);
}

}  // namespace
}  // namespace pnorm
