#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "pnorm/eig.hpp"
#include "pnorm/errors.hpp"
#include "pnorm/io.hpp"
#include "pnorm/lambert.hpp"
#include "pnorm/rng.hpp"
#include "pnorm/sym_matrix.hpp"
#include "test_util.hpp"

namespace pnorm {
namespace {

TEST(SymMatrix, ConstructionSymmetrizesExactly) {
  Matrix x(3, 3);
  x << 1, 2, 3, 0.1, 5, 6, 7, 8, 9;
  const SymMatrix m(x);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(m(i, j), m(j, i));
  }
  EXPECT_DOUBLE_EQ(m(0, 1), 1.05);
  EXPECT_THROW(SymMatrix(std::size_t{0}), DimensionError);
  EXPECT_THROW((SymMatrix{{1.0, 2.0}, {3.0}}), DimensionError);
}

TEST(SymMatrix, TraceNormalization) {
  const SymMatrix m{{2.0, 1.0}, {1.0, 6.0}};
  EXPECT_DOUBLE_EQ(trace_normalized(m).trace(), 1.0);
  EXPECT_THROW(trace_normalized(SymMatrix(2)), DomainError);
}

TEST(SymEig, IdentityHasUnitSpectrum) {
  const auto e = sym_eig(SymMatrix::identity(3));
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(e.values(i), 1.0);
  EXPECT_LE((e.vectors.transpose() * e.vectors - Matrix::Identity(3, 3)).norm(), 1e-12);
}

TEST(SymEig, DiagonalGivesSignedPermutation) {
  Vector v(2);
  v << 1.0, 3.0;
  const auto e = sym_eig(SymMatrix::diagonal(v));
  EXPECT_DOUBLE_EQ(e.values(0), 3.0);
  EXPECT_DOUBLE_EQ(e.values(1), 1.0);
  EXPECT_DOUBLE_EQ(std::abs(e.vectors(1, 0)), 1.0);
  EXPECT_DOUBLE_EQ(std::abs(e.vectors(0, 1)), 1.0);
  EXPECT_DOUBLE_EQ(e.vectors(0, 0), 0.0);
}

TEST(SymEig, RandomSpdSeed7Reconstructs) {
  RngStream rng(7);
  const SymMatrix m = random_spd(16, SpectrumLaw::uniform(), rng);
  const auto e = sym_eig(m);
  EXPECT_LE(rel_frobenius(e.reconstruct(), m), 1e-9);
}

TEST(SymEig, PropertyReconstructionAndOrthogonality) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t d = 1 + seed % 24;
    RngStream rng(seed);
    const auto law = seed % 2 ? SpectrumLaw::uniform() : SpectrumLaw::beta(2, 5);
    const SymMatrix m = random_spd(d, law, rng);
    const auto e = sym_eig(m);
    const double dd = static_cast<double>(d);
    EXPECT_LE(rel_frobenius(e.reconstruct(), m), 1e-9) << "seed " << seed;
    EXPECT_LE((e.vectors.transpose() * e.vectors - Matrix::Identity(e.vectors.rows(), e.vectors.cols())).norm(),
              1e-10 * dd);
    for (Eigen::Index i = 0; i + 1 < e.values.size(); ++i) EXPECT_GE(e.values(i), e.values(i + 1));
    // Indefinite inputs work too.
    const auto s = sym_eig(testing::random_sym(d, seed));
    EXPECT_LE(rel_frobenius(s.reconstruct(), testing::random_sym(d, seed)), 1e-9);
  }
}

TEST(SymEig, DeterministicForFixedInput) {
  const SymMatrix m = testing::random_sym(12, 3);
  const auto a = sym_eig(m);
  const auto b = sym_eig(m);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.vectors, b.vectors);
}

TEST(SymEig, RejectsNonFinite) {
  SymMatrix m(2);
  m.set(0, 1, std::numeric_limits<double>::quiet_NaN());
  EXPECT_THROW(sym_eig(m), DomainError);
}

TEST(SymEig, MinAdjacentGap) {
  Vector v(4);
  v << 4.0, 3.5, 3.4, 1.0;
  EXPECT_NEAR(min_adjacent_gap(v), 0.1, 1e-15);
  EXPECT_TRUE(std::isinf(min_adjacent_gap(Vector::Ones(1))));
}

TEST(LambertW, Examples) {
  EXPECT_EQ(lambert_w(0, 0.0), 0.0);
  EXPECT_NEAR(lambert_w(0, std::exp(1.0)), 1.0, 1e-15);
  EXPECT_NEAR(lambert_w(-1, -std::exp(-1.0)), -1.0, 1e-7);
  // Omega constant: the fixed point of x = e^{-x}.
  double omega = 0.5;
  for (int i = 0; i < 200; ++i) omega = std::exp(-omega);
  EXPECT_NEAR(lambert_w(0, 1.0), omega, 1e-14);
  EXPECT_NEAR(lambert_w(0, 1.0), 0.567143, 1e-6);
}

TEST(LambertW, ResidualOverThousandPointsPerBranch) {
  RngStream rng(11);
  const double lo = -std::exp(-1.0);
  for (int i = 0; i < 1000; ++i) {
    // Principal branch: mix of points near the branch point and large x.
    const double x0 = i % 2 ? rng.uniform(lo, 1.0) : std::exp(rng.uniform(-5.0, 40.0));
    const double w0 = lambert_w(0, x0);
    EXPECT_LE(std::abs(w0 * std::exp(w0) - x0), 1e-12 * std::max(1.0, std::abs(x0))) << x0;

    const double x1 = i % 2 ? rng.uniform(lo, 0.0) : -std::exp(rng.uniform(-300.0, -1.0));
    if (x1 >= 0.0) continue;
    const double w1 = lambert_w(-1, x1);
    EXPECT_LE(w1, -1.0 + 1e-7);
    EXPECT_LE(std::abs(w1 * std::exp(w1) - x1), 1e-12 * std::max(1.0, std::abs(x1))) << x1;
  }
}

TEST(LambertW, DomainErrors) {
  EXPECT_THROW(lambert_w(0, -0.5), DomainError);
  EXPECT_THROW(lambert_w(-1, 0.0), DomainError);
  EXPECT_THROW(lambert_w(-1, 0.5), DomainError);
  EXPECT_THROW(lambert_w(-1, -0.4), DomainError);
  EXPECT_THROW(lambert_w(1, 0.5), DomainError);
  EXPECT_THROW(lambert_w(0, std::numeric_limits<double>::quiet_NaN()), DomainError);
}

TEST(Rng, SameSeedSameSequence) {
  RngStream a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    differs |= x != c.next_u64();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, KnownEngineOutput) {
  // The standard fixes the 10000th output of a default-seeded mt19937_64.
  RngStream rng(5489u);
  std::uint64_t x = 0;
  for (int i = 0; i < 10000; ++i) x = rng.next_u64();
  EXPECT_EQ(x, 9981545732273789042ULL);
}

TEST(Rng, MomentsAreSane) {
  RngStream rng(1);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0, sb = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
    sb += rng.beta(2, 5);
  }
  EXPECT_NEAR(su / n, 0.5, 0.005);
  EXPECT_NEAR(sn / n, 0.0, 0.01);
  EXPECT_NEAR(sn2 / n, 1.0, 0.02);
  EXPECT_NEAR(sb / n, 2.0 / 7.0, 0.003);
  double sg = 0;
  for (int i = 0; i < n; ++i) sg += rng.gamma(0.5);
  EXPECT_NEAR(sg / n, 0.5, 0.01);
}

TEST(RandomSpd, ScalarCase) {
  RngStream rng(3);
  const SymMatrix m = random_spd(1, SpectrumLaw::uniform(), rng);
  EXPECT_EQ(m.dim(), 1u);
  EXPECT_GT(m(0, 0), 0.0);
}

TEST(RandomSpd, BetaSpectrumAfterTraceNormalization) {
  RngStream rng(1);
  const SymMatrix m = trace_normalized(random_spd(8, SpectrumLaw::beta(2, 5), rng));
  const auto e = sym_eig(m);
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    EXPECT_GT(e.values(i), 0.0);
    EXPECT_LE(e.values(i), 1.0);
  }
}

TEST(RandomSpd, Deterministic) {
  RngStream a(9), b(9);
  EXPECT_EQ(random_spd(10, SpectrumLaw::beta(2, 5), a), random_spd(10, SpectrumLaw::beta(2, 5), b));
}

TEST(RandomSpd, ConditionNumberIsPinned) {
  RngStream rng(2);
  const auto e = sym_eig(random_spd_cond(16, 1e4, rng));
  EXPECT_NEAR(e.values(0) / e.values(15), 1e4, 1e-6 * 1e4);
}

TEST(MatIo, IdentityRoundTrip) {
  std::stringstream ss;
  write_symmat(ss, SymMatrix::identity(2));
  EXPECT_EQ(ss.str(), "SYMMAT 2\n1 0\n0 1\n");
  EXPECT_EQ(read_symmat(ss), SymMatrix::identity(2));
}

TEST(MatIo, MissingRowReportsLine) {
  std::stringstream ss("SYMMAT 3\n1 0 0\n0 1 0\n");
  try {
    read_symmat(ss);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
}

TEST(MatIo, MalformedInputs) {
  auto fails_at = [](const std::string& text, std::size_t line) {
    std::stringstream ss(text);
    try {
      read_symmat(ss);
    } catch (const ParseError& e) {
      return e.line() == line;
    }
    return false;
  };
  EXPECT_TRUE(fails_at("", 1));
  EXPECT_TRUE(fails_at("SYMMAT\n", 1));
  EXPECT_TRUE(fails_at("SYMMAT x\n", 1));
  EXPECT_TRUE(fails_at("SYMMAT 0\n", 1));
  EXPECT_TRUE(fails_at("MATRIX 1\n1\n", 1));
  EXPECT_TRUE(fails_at("SYMMAT 2\n1 2\n3\n", 3));
  EXPECT_TRUE(fails_at("SYMMAT 2\n1 2\n2 nan\n", 3));
  EXPECT_TRUE(fails_at("SYMMAT 2\n1 inf\ninf 1\n", 2));
  EXPECT_TRUE(fails_at("SYMMAT 2\n1 2\n2 1x\n", 3));
  EXPECT_TRUE(fails_at("SYMMAT 2\n1 2\n3 1\n", 3));
  EXPECT_TRUE(fails_at("SYMMAT 1\n1\n2\n", 3));
}

TEST(MatIo, FeatureBlockRoundTripIsBitExact) {
  RngStream rng(5);
  FeatureBlock f(4, 10);
  for (std::size_t k = 0; k < 4; ++k) {
    for (std::size_t n = 0; n < 10; ++n) f(k, n) = rng.normal() * std::pow(10.0, rng.uniform(-300, 300));
  }
  f(0, 0) = 1.0 / 3.0;
  f(1, 1) = 5e-324;
  f(2, 2) = -0.0;
  f(3, 3) = std::numeric_limits<double>::max();
  std::stringstream ss;
  write_features(ss, f);
  const FeatureBlock g = read_features(ss);
  ASSERT_EQ(g.channels(), 4u);
  ASSERT_EQ(g.count(), 10u);
  for (std::size_t k = 0; k < 4; ++k) {
    for (std::size_t n = 0; n < 10; ++n) {
      const double a = f(k, n), b = g(k, n);
      EXPECT_EQ(std::memcmp(&a, &b, sizeof(double)), 0);
    }
  }
}

TEST(MatIo, WriterRefusesNonFinite) {
  FeatureBlock f(1, 1);
  f(0, 0) = std::numeric_limits<double>::infinity();
  std::stringstream ss;
  EXPECT_THROW(write_features(ss, f), DomainError);
}

TEST(MatIo, FileRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "pnorm_io_test";
  std::filesystem::create_directories(dir);
  const SymMatrix m = testing::random_sym(7, 21);
  write_symmat(dir / "m.txt", m);
  EXPECT_EQ(read_symmat(dir / "m.txt"), m);
  EXPECT_THROW(read_symmat(dir / "missing.txt"), IoError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace pnorm
