#include "pnorm/sym_matrix.hpp"

#include <algorithm>
#include <limits>

#include "pnorm/errors.hpp"

namespace pnorm {

Matrix sym(const Matrix& x) {
  if (x.rows() != x.cols()) throw DimensionError("sym: matrix is not square");
  return 0.5 * (x + x.transpose());
}

SymMatrix::SymMatrix(std::size_t d) {
  if (d == 0) throw DimensionError("SymMatrix: dimension must be at least 1");
  data_ = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}

SymMatrix::SymMatrix(const Matrix& m) {
  if (m.rows() == 0) throw DimensionError("SymMatrix: dimension must be at least 1");
  data_ = sym(m);
}

SymMatrix::SymMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  const auto d = static_cast<Eigen::Index>(rows.size());
  if (d == 0) throw DimensionError("SymMatrix: dimension must be at least 1");
  Matrix m(d, d);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Eigen::Index>(row.size()) != d) {
      throw DimensionError("SymMatrix: ragged initializer");
    }
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  data_ = sym(m);
}

SymMatrix SymMatrix::identity(std::size_t d) {
  SymMatrix out(d);
  out.data_.setIdentity();
  return out;
}

SymMatrix SymMatrix::diagonal(const Vector& values) {
  SymMatrix out(static_cast<std::size_t>(values.size()));
  out.data_.diagonal() = values;
  return out;
}

void SymMatrix::set(std::size_t i, std::size_t j, double v) {
  data_(i, j) = v;
  data_(j, i) = v;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) {
  if (o.dim() != dim()) throw DimensionError("SymMatrix: dimension mismatch in +");
  data_ += o.data_;
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& o) {
  if (o.dim() != dim()) throw DimensionError("SymMatrix: dimension mismatch in -");
  data_ -= o.data_;
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  data_ *= s;
  return *this;
}

SymMatrix trace_normalized(const SymMatrix& m) {
  const double tr = m.trace();
  if (!(tr > 0.0)) throw DomainError("trace_normalized: trace must be positive");
  return m * (1.0 / tr);
}

double rel_frobenius(const Matrix& a, const Matrix& b, double floor) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("rel_frobenius: shape mismatch");
  }
  return (a - b).norm() / std::max(b.norm(), floor);
}

}  // namespace pnorm
