#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pnorm/feature_block.hpp"
#include "pnorm/pn_config.hpp"
#include "pnorm/sym_matrix.hpp"

namespace pnorm {

// RBF encoder for one normalized coordinate: component i is
// exp(−(x − ζ_i)²/σ²). Pivots default to Z points evenly spaced on [−0.2, 1.2].
struct CoordEncoderConfig {
  std::vector<double> pivots;
  double sigma = 0.5;
  double alpha = 1.0;

  static constexpr std::size_t kMinPivots = 2;
  static constexpr std::size_t kMaxPivots = 64;

  static CoordEncoderConfig make(std::size_t z, double sigma, double alpha = 1.0);
  std::size_t size() const { return pivots.size(); }
  void validate() const;
};

std::vector<double> default_pivots(std::size_t z);

struct EncodedCoordinate {
  std::vector<double> values;
  bool out_of_range = false;  // x outside [0, 1]; encoded anyway
};

EncodedCoordinate encode_coordinate(double x, const CoordEncoderConfig& cfg);

// Rectangle width times the Gaussian normalizer, Δ·√(2/(πσ²)). Multiplying
// ⟨φ(x), φ(y)⟩ by it approximates G_σ(x − y) = exp(−(x − y)²/(2σ²)).
double riemann_constant(const CoordEncoderConfig& cfg);

// Per-column normalized (x, y) locations.
struct Coordinates {
  std::vector<double> x;
  std::vector<double> y;
};

// Raster order, row-major: column n = y'·W + x' maps to (x'/(W−1), y'/(H−1)).
// A side of length 1 maps to 0.
Coordinates coordinate_grid(std::size_t width, std::size_t height);

struct PoolSpec {
  double beta = 0.0;
  std::optional<CoordEncoderConfig> coord;

  void validate() const;
};

// φ_n − β·μ with μ the mean column.
FeatureBlock beta_center(const FeatureBlock& block, double beta);

// β-centered features stacked over α·φ(x_n) and α·φ(y_n) when spec.coord is
// set. Result has K (+ 2Z) rows.
FeatureBlock augment(const FeatureBlock& block, const PoolSpec& spec,
                     const Coordinates* coords = nullptr);

// (1/N)·Σ_n x_n x_nᵀ over the columns of augment(block, spec, coords).
SymMatrix autocorrelation(const FeatureBlock& block, const PoolSpec& spec = {},
                          const Coordinates* coords = nullptr);

enum class RelationVariant {
  Mean,          // PN of the autocorrelation of the mean support block
  MeanOfPooled,  // mean over supports of PN of each support's autocorrelation
};

enum class PnEngine { Elementwise, Spectral };

struct RelationPair {
  SymMatrix support;
  SymMatrix query;
};

// Support/query descriptors for a few-shot relation learner. Blocks must share
// K; the Mean variant also needs equal N.
RelationPair relation_descriptor(RelationVariant variant, const std::vector<FeatureBlock>& supports,
                                 const FeatureBlock& query, const PNConfig& pn,
                                 PnEngine engine = PnEngine::Elementwise);

}  // namespace pnorm
