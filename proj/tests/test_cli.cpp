#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "pnorm/pnorm.hpp"
#include "pnorm_tools/cli.hpp"

namespace {

using pnorm::SymMatrix;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "pnorm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = pnorm::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  ADD_FAILURE() << "no column " << name;
  return 0;
}

class TempDir {
 public:
  TempDir()
      : path_(std::filesystem::temp_directory_path() /
              ("pnorm_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()))) {
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

TEST(Cli, NoSubcommandIsUsageError) { EXPECT_EQ(run({}).code, 2); }

TEST(Cli, UnknownOptionIsUsageError) { EXPECT_EQ(run({"kappa", "--bogus"}).code, 2); }

TEST(Kappa, ClosedFormRows) {
  const CliRun r = run({"kappa", "--j-max", "2", "--n", "1,4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv(r.out);
  ASSERT_EQ(rows.size(), 7u);  // J = 0, 1, 2 for each N
  EXPECT_EQ(rows[0], (std::vector<std::string>{"J", "N", "kappa", "kappa_prime"}));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const int j = std::stoi(rows[i][0]), n = std::stoi(rows[i][1]);
    EXPECT_NEAR(std::stod(rows[i][2]), pnorm::support_ratio(j, n), 1e-12);
    EXPECT_NEAR(std::stod(rows[i][3]), pnorm::variance_ratio(n), 1e-12);
  }
}

TEST(Time, ZeroRepsIsUsageError) { EXPECT_EQ(run({"time", "--op", "maxexp-fast", "--reps", "0"}).code, 2); }

TEST(Time, NewtonSchulzCountsSixtyProducts) {
  const CliRun r = run({"time", "--op", "newton-schulz", "--d", "8", "--iters", "20", "--reps", "1", "--warmup", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][column(rows[0], "mm_forward")], "60");
  EXPECT_EQ(rows[1][column(rows[0], "bwd_mean_ms")], "");
}

TEST(Time, FastMaxExpRowPerParameter) {
  const CliRun r = run({"time", "--op", "maxexp-fast", "--d", "200", "--eta", "8,64,512", "--reps", "1", "--warmup", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv(r.out);
  ASSERT_EQ(rows.size(), 4u);
  const std::size_t fwd = column(rows[0], "mm_forward"), bwd = column(rows[0], "mm_backward");
  EXPECT_EQ(rows[1][fwd], "4");
  EXPECT_EQ(rows[2][fwd], "7");
  EXPECT_EQ(rows[3][fwd], "10");
  EXPECT_EQ(rows[1][bwd], "5");
  EXPECT_EQ(rows[3][bwd], "11");
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GT(std::stod(rows[i][column(rows[0], "fwd_mean_ms")]), 0.0);
}

TEST(Time, NonIntegerFastParameterIsUsageError) {
  EXPECT_EQ(run({"time", "--op", "gamma-fast", "--gamma", "1.5", "--reps", "1"}).code, 2);
}

TEST(Bounds, StandardGridPasses) {
  const CliRun r = run({"bounds"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(csv(r.out).size(), 101u);
}

TEST(Bounds, SingleEtaRow) {
  const CliRun r = run({"bounds", "--eta", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_LE(std::stod(rows[1][column(rows[0], "eps1")]), std::stod(rows[1][column(rows[0], "eps2")]));
}

TEST(Bounds, ScaledTIsReported) {
  const CliRun r = run({"bounds", "--inject-t-scale", "1.5"});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.err.empty());
}

TEST(Pushforward, IdentityLawIsPointMass) {
  const CliRun r = run({"pushforward", "--op", "identity", "--law", "identity", "--d", "4", "--samples", "3",
                     "--param", "0", "--bins", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv(r.out);
  ASSERT_EQ(rows.size(), 2u);
  // Trace-normalized identity has every eigenvalue at 1/4, bin 2 of 10.
  EXPECT_EQ(std::stod(rows[1][column(rows[0], "post_2")]), 1.0);
  EXPECT_EQ(std::stod(rows[1][column(rows[0], "top_var")]), 0.0);
}

TEST(Pushforward, WhiteningCheckHoldsAtDefaults) {
  const CliRun r = run({"pushforward", "--op", "maxexp", "--check"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto rows = csv(r.out);
  ASSERT_EQ(rows.size(), 4u);
  const std::size_t v = column(rows[0], "top_var");
  EXPECT_GE(std::stod(rows[1][v]), std::stod(rows[2][v]));
  EXPECT_GE(std::stod(rows[2][v]), std::stod(rows[3][v]));
}

TEST(Pushforward, HdpComparison) {
  const CliRun r = run({"pushforward", "--compare-t", "0.3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_LT(std::stod(rows[1][column(rows[0], "cdf_l1")]), 0.15);
  EXPECT_NEAR(std::stod(rows[1][column(rows[0], "eta")]), pnorm::eta_of_t(0.3), 1e-9);
}

TEST(Pushforward, DeterministicForSeed) {
  const std::vector<std::string> args{"--seed", "7", "pushforward", "--op", "maxexp", "--param", "20"};
  EXPECT_EQ(run(args).out, run(args).out);
}

TEST(Pool, TwoByOneFeature) {
  TempDir dir;
  pnorm::FeatureBlock f(2, 1);
  f(0, 0) = 1;
  f(1, 0) = 2;
  pnorm::write_features(std::filesystem::path(dir.file("f.txt")), f);
  const CliRun r = run({"--out", dir.file("m.txt"), "pool", "--input", dir.file("f.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  const SymMatrix m = pnorm::read_symmat(std::filesystem::path(dir.file("m.txt")));
  ASSERT_EQ(m.dim(), 2u);
  EXPECT_EQ(m(0, 0), 1.0);
  EXPECT_EQ(m(0, 1), 2.0);
  EXPECT_EQ(m(1, 1), 4.0);
}

TEST(Pool, MissingInputIsUsageError) {
  EXPECT_EQ(run({"pool", "--input", "/nonexistent/pnorm/features.txt"}).code, 2);
}

TEST(Pool, FastEngineRejectsSigmE) {
  TempDir dir;
  pnorm::FeatureBlock f(2, 2);
  f(0, 0) = f(1, 1) = 1;
  pnorm::write_features(std::filesystem::path(dir.file("f.txt")), f);
  EXPECT_EQ(run({"pool", "--input", dir.file("f.txt"), "--op", "sigme", "--engine", "fast"}).code, 2);
}

TEST(Pool, EnginesAgreeOnDiagonalAutocorrelation) {
  // One-hot columns give a diagonal matrix, where both engines act per entry
  // once ε is zero (ε^γ would otherwise fill the off-diagonal zeros).
  TempDir dir;
  pnorm::FeatureBlock f(3, 6);
  for (std::size_t n = 0; n < 6; ++n) f(n % 3, n) = 1.0 + static_cast<double>(n);
  pnorm::write_features(std::filesystem::path(dir.file("f.txt")), f);
  const std::pair<std::string, std::string> cases[] = {
      {"maxexp", "5"}, {"gamma", "0.5"}, {"asinhe", "0.5"}, {"sigme", "5"}, {"hdp", "0.5"}};
  for (const auto& [op, param] : cases) {
    ASSERT_EQ(run({"--out", dir.file("e.txt"), "pool", "--input", dir.file("f.txt"), "--op", op, "--param", param, "--eps", "0",
                   "--engine", "elementwise"})
                  .code,
              0);
    ASSERT_EQ(run({"--out", dir.file("s.txt"), "pool", "--input", dir.file("f.txt"), "--op", op, "--param", param, "--eps", "0",
                   "--engine", "spectral"})
                  .code,
              0);
    const SymMatrix e = pnorm::read_symmat(std::filesystem::path(dir.file("e.txt")));
    const SymMatrix s = pnorm::read_symmat(std::filesystem::path(dir.file("s.txt")));
    EXPECT_LT(pnorm::rel_frobenius(s, e), 1e-12) << op;
  }
}

TEST(Pool, FastAndSpectralMaxExpAgree) {
  TempDir dir;
  pnorm::RngStream rng(11);
  pnorm::FeatureBlock f(16, 64);
  for (std::size_t k = 0; k < 16; ++k) {
    for (std::size_t n = 0; n < 64; ++n) f(k, n) = rng.uniform();
  }
  pnorm::write_features(std::filesystem::path(dir.file("f.txt")), f);
  const std::vector<std::string> common{"pool", "--input", dir.file("f.txt"), "--op", "maxexp", "--param", "50",
                                        "--eps", "0"};
  auto spectral = common, fast = common;
  spectral.insert(spectral.begin(), {"--out", dir.file("s.txt")});
  spectral.insert(spectral.end(), {"--engine", "spectral"});
  fast.insert(fast.begin(), {"--out", dir.file("f_out.txt")});
  fast.insert(fast.end(), {"--engine", "fast"});
  ASSERT_EQ(run(spectral).code, 0);
  ASSERT_EQ(run(fast).code, 0);
  const SymMatrix s = pnorm::read_symmat(std::filesystem::path(dir.file("s.txt")));
  const SymMatrix q = pnorm::read_symmat(std::filesystem::path(dir.file("f_out.txt")));
  EXPECT_LT(pnorm::rel_frobenius(q, s), 1e-9);
}

TEST(Gradcheck, PassesAndNegationFails) {
  const CliRun ok = run({"gradcheck", "--seeds", "1"});
  EXPECT_EQ(ok.code, 0) << ok.err;
  const auto rows = csv(ok.out);
  ASSERT_GT(rows.size(), 1u);
  EXPECT_LE(std::stod(rows[1][column(rows[0], "max_rel_error")]), 1e-4);

  const CliRun bad = run({"gradcheck", "--seeds", "1", "--negate"});
  EXPECT_EQ(bad.code, 1);
}

}  // namespace
