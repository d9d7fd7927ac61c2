#include "pnorm/feature_block.hpp"

#include "pnorm/errors.hpp"

namespace pnorm {

FeatureBlock::FeatureBlock(std::size_t channels, std::size_t count) {
  if (channels == 0 || count == 0) throw DimensionError("FeatureBlock: K and N must be >= 1");
  data_ = Matrix::Zero(static_cast<Eigen::Index>(channels), static_cast<Eigen::Index>(count));
}

FeatureBlock::FeatureBlock(Matrix data) : data_(std::move(data)) {
  if (data_.rows() == 0 || data_.cols() == 0) {
    throw DimensionError("FeatureBlock: K and N must be >= 1");
  }
}

}  // namespace pnorm
