#pragma once

#include <cstddef>
#include <initializer_list>

#include <Eigen/Dense>

namespace pnorm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// ½(X + Xᵀ). The result is exactly symmetric in floating point.
Matrix sym(const Matrix& x);

// Dense real symmetric d×d matrix. Every constructor symmetrizes its input,
// so (i,j) and (j,i) always hold the same bits.
class SymMatrix {
 public:
  SymMatrix() : SymMatrix(1) {}
  explicit SymMatrix(std::size_t d);
  explicit SymMatrix(const Matrix& m);
  SymMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static SymMatrix identity(std::size_t d);
  static SymMatrix diagonal(const Vector& values);

  std::size_t dim() const { return static_cast<std::size_t>(data_.rows()); }
  double operator()(std::size_t i, std::size_t j) const { return data_(i, j); }
  const Matrix& matrix() const { return data_; }

  double trace() const { return data_.trace(); }
  double norm() const { return data_.norm(); }
  bool is_finite() const { return data_.allFinite(); }

  // Sets (i,j) and (j,i) together.
  void set(std::size_t i, std::size_t j, double v);

  SymMatrix& operator+=(const SymMatrix& o);
  SymMatrix& operator-=(const SymMatrix& o);
  SymMatrix& operator*=(double s);

  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(SymMatrix a, double s) { return a *= s; }
  friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }
  friend bool operator==(const SymMatrix& a, const SymMatrix& b) {
    return a.data_.rows() == b.data_.rows() && a.data_ == b.data_;
  }

 private:
  Matrix data_;
};

// M / trace(M). Throws DomainError when the trace is not positive.
SymMatrix trace_normalized(const SymMatrix& m);

// ‖a − b‖_F / max(‖b‖_F, floor).
double rel_frobenius(const Matrix& a, const Matrix& b, double floor = 1e-300);
inline double rel_frobenius(const SymMatrix& a, const SymMatrix& b, double floor = 1e-300) {
  return rel_frobenius(a.matrix(), b.matrix(), floor);
}

// Frobenius inner product ⟨a, b⟩ = Σ a_ij b_ij.
inline double inner(const SymMatrix& a, const SymMatrix& b) {
  return a.matrix().cwiseProduct(b.matrix()).sum();
}

}  // namespace pnorm
