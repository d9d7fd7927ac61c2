#include "pnorm/rng.hpp"

#include <cmath>
#include <numbers>

#include "pnorm/errors.hpp"

namespace pnorm {

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double RngStream::gamma(double shape) {
  if (!(shape > 0.0)) throw DomainError("RngStream::gamma: shape must be positive");
  if (shape < 1.0) {
    // Boost to shape + 1, then scale by U^(1/shape).
    double u = uniform();
    while (u <= 0.0) u = uniform();
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double RngStream::beta(double a, double b) {
  const double x = gamma(a);
  const double y = gamma(b);
  return x / (x + y);
}

double SpectrumLaw::draw(RngStream& rng) const {
  for (;;) {
    const double v = kind == Kind::Uniform ? 1.0 - rng.uniform() : rng.beta(a, b);
    if (v > 0.0 && v <= 1.0) return v;
  }
}

Matrix random_orthogonal(std::size_t d, RngStream& rng) {
  const auto n = static_cast<Eigen::Index>(d);
  Matrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

SymMatrix random_spd(std::size_t d, const SpectrumLaw& law, RngStream& rng) {
  if (d == 0) throw DimensionError("random_spd: d must be at least 1");
  Vector lambda(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < lambda.size(); ++i) lambda(i) = law.draw(rng);
  const Matrix q = random_orthogonal(d, rng);
  return SymMatrix(q * lambda.asDiagonal() * q.transpose());
}

SymMatrix random_spd_cond(std::size_t d, double cond, RngStream& rng) {
  if (d == 0) throw DimensionError("random_spd_cond: d must be at least 1");
  if (!(cond >= 1.0)) throw DomainError("random_spd_cond: cond must be >= 1");
  Vector lambda(static_cast<Eigen::Index>(d));
  const double lo = -std::log(cond);
  for (Eigen::Index i = 0; i < lambda.size(); ++i) lambda(i) = std::exp(rng.uniform(lo, 0.0));
  lambda(0) = 1.0;
  if (d > 1) lambda(lambda.size() - 1) = 1.0 / cond;
  const Matrix q = random_orthogonal(d, rng);
  return SymMatrix(q * lambda.asDiagonal() * q.transpose());
}

}  // namespace pnorm
