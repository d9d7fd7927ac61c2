#include "pnorm/sop.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pnorm/elempn.hpp"
#include "pnorm/errors.hpp"
#include "pnorm/specpn.hpp"

namespace pnorm {

std::vector<double> default_pivots(std::size_t z) {
  if (z < CoordEncoderConfig::kMinPivots || z > CoordEncoderConfig::kMaxPivots) {
    throw DomainError("default_pivots: Z must be in [2, 64], got " + std::to_string(z));
  }
  std::vector<double> out(z);
  const double step = 1.4 / static_cast<double>(z - 1);
  for (std::size_t i = 0; i < z; ++i) out[i] = -0.2 + step * static_cast<double>(i);
  out.back() = 1.2;
  return out;
}

CoordEncoderConfig CoordEncoderConfig::make(std::size_t z, double sigma, double alpha) {
  CoordEncoderConfig cfg;
  cfg.pivots = default_pivots(z);
  cfg.sigma = sigma;
  cfg.alpha = alpha;
  cfg.validate();
  return cfg;
}

void CoordEncoderConfig::validate() const {
  if (pivots.size() < kMinPivots || pivots.size() > kMaxPivots) {
    throw DomainError("CoordEncoderConfig: pivot count must be in [2, 64]");
  }
  if (!(sigma > 0.0)) throw DomainError("CoordEncoderConfig: sigma must be > 0");
  if (!(alpha >= 0.0)) throw DomainError("CoordEncoderConfig: alpha must be >= 0");
}

EncodedCoordinate encode_coordinate(double x, const CoordEncoderConfig& cfg) {
  cfg.validate();
  EncodedCoordinate out;
  out.out_of_range = !(x >= 0.0 && x <= 1.0);
  out.values.reserve(cfg.size());
  const double inv = 1.0 / (cfg.sigma * cfg.sigma);
  for (double z : cfg.pivots) {
    const double d = x - z;
    out.values.push_back(std::exp(-d * d * inv));
  }
  return out;
}

double riemann_constant(const CoordEncoderConfig& cfg) {
  cfg.validate();
  const double width = (cfg.pivots.back() - cfg.pivots.front()) /
                       static_cast<double>(cfg.pivots.size() - 1);
  return width * std::sqrt(2.0 / (std::numbers::pi * cfg.sigma * cfg.sigma));
}

Coordinates coordinate_grid(std::size_t width, std::size_t height) {
  if (width == 0 || height == 0) throw DimensionError("coordinate_grid: empty grid");
  Coordinates c;
  c.x.reserve(width * height);
  c.y.reserve(width * height);
  const double sx = width > 1 ? 1.0 / static_cast<double>(width - 1) : 0.0;
  const double sy = height > 1 ? 1.0 / static_cast<double>(height - 1) : 0.0;
  for (std::size_t yy = 0; yy < height; ++yy) {
    for (std::size_t xx = 0; xx < width; ++xx) {
      c.x.push_back(static_cast<double>(xx) * sx);
      c.y.push_back(static_cast<double>(yy) * sy);
    }
  }
  return c;
}

void PoolSpec::validate() const {
  if (!(beta >= 0.0 && beta <= 1.0)) throw DomainError("PoolSpec: beta must lie in [0, 1]");
  if (coord) coord->validate();
}

FeatureBlock beta_center(const FeatureBlock& block, double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw DomainError("beta_center: beta must lie in [0, 1]");
  if (beta == 0.0) return block;
  const Vector mu = block.matrix().rowwise().mean();
  Matrix out = block.matrix();
  out.colwise() -= beta * mu;
  return FeatureBlock(std::move(out));
}

FeatureBlock augment(const FeatureBlock& block, const PoolSpec& spec, const Coordinates* coords) {
  spec.validate();
  FeatureBlock centered = beta_center(block, spec.beta);
  if (!spec.coord) return centered;

  if (coords == nullptr) throw DimensionError("augment: coordinate encoder set but no coordinates");
  const std::size_t n = block.count();
  if (coords->x.size() != n || coords->y.size() != n) {
    throw DimensionError("augment: coordinate count " + std::to_string(coords->x.size()) +
                         " does not match N=" + std::to_string(n));
  }
  const auto& cfg = *spec.coord;
  const auto k = static_cast<Eigen::Index>(block.channels());
  const auto z = static_cast<Eigen::Index>(cfg.size());
  Matrix out(k + 2 * z, static_cast<Eigen::Index>(n));
  out.topRows(k) = centered.matrix();
  for (std::size_t col = 0; col < n; ++col) {
    const auto ex = encode_coordinate(coords->x[col], cfg);
    const auto ey = encode_coordinate(coords->y[col], cfg);
    const auto c = static_cast<Eigen::Index>(col);
    for (Eigen::Index i = 0; i < z; ++i) {
      out(k + i, c) = cfg.alpha * ex.values[static_cast<std::size_t>(i)];
      out(k + z + i, c) = cfg.alpha * ey.values[static_cast<std::size_t>(i)];
    }
  }
  return FeatureBlock(std::move(out));
}

SymMatrix autocorrelation(const FeatureBlock& block, const PoolSpec& spec,
                          const Coordinates* coords) {
  const FeatureBlock x = augment(block, spec, coords);
  const auto d = static_cast<Eigen::Index>(x.channels());
  Matrix m = Matrix::Zero(d, d);
  m.selfadjointView<Eigen::Lower>().rankUpdate(x.matrix(), 1.0 / static_cast<double>(x.count()));
  m.triangularView<Eigen::StrictlyUpper>() = m.transpose();
  return SymMatrix(m);
}

namespace {

SymMatrix apply_pn(const SymMatrix& m, const PNConfig& pn, PnEngine engine) {
  if (engine == PnEngine::Elementwise) return pn_forward(m, pn);
  return spn_forward(m, pn).psi;
}

}  // namespace

RelationPair relation_descriptor(RelationVariant variant, const std::vector<FeatureBlock>& supports,
                                 const FeatureBlock& query, const PNConfig& pn, PnEngine engine) {
  if (supports.empty()) throw DimensionError("relation_descriptor: need at least one support");
  for (const auto& s : supports) {
    if (s.channels() != query.channels()) {
      throw DimensionError("relation_descriptor: support and query channel counts differ");
    }
  }
  const double j = static_cast<double>(supports.size());
  SymMatrix query_desc = apply_pn(autocorrelation(query), pn, engine);

  if (variant == RelationVariant::Mean) {
    Matrix mean = Matrix::Zero(supports[0].matrix().rows(), supports[0].matrix().cols());
    for (const auto& s : supports) {
      if (s.count() != supports[0].count()) {
        throw DimensionError("relation_descriptor: averaging supports needs equal N");
      }
      mean += s.matrix();
    }
    mean /= j;
    return {apply_pn(autocorrelation(FeatureBlock(std::move(mean))), pn, engine),
            std::move(query_desc)};
  }

  SymMatrix acc(query.channels());
  for (const auto& s : supports) acc += apply_pn(autocorrelation(s), pn, engine);
  acc *= 1.0 / j;
  return {std::move(acc), std::move(query_desc)};
}

}  // namespace pnorm
