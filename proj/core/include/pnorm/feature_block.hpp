#pragma once

#include <cstddef>

#include "pnorm/sym_matrix.hpp"

namespace pnorm {

// K×N block of feature vectors; column n is φ_n.
class FeatureBlock {
 public:
  FeatureBlock(std::size_t channels, std::size_t count);
  explicit FeatureBlock(Matrix data);

  std::size_t channels() const { return static_cast<std::size_t>(data_.rows()); }
  std::size_t count() const { return static_cast<std::size_t>(data_.cols()); }
  const Matrix& matrix() const { return data_; }
  Matrix& matrix() { return data_; }

  double operator()(std::size_t k, std::size_t n) const { return data_(k, n); }
  double& operator()(std::size_t k, std::size_t n) { return data_(k, n); }

  friend bool operator==(const FeatureBlock& a, const FeatureBlock& b) {
    return a.data_.rows() == b.data_.rows() && a.data_.cols() == b.data_.cols() &&
           a.data_ == b.data_;
  }

 private:
  Matrix data_;
};

}  // namespace pnorm
