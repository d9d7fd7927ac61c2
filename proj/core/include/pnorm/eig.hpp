#pragma once

#include "pnorm/sym_matrix.hpp"

namespace pnorm {

// Columns of `vectors` are eigenvectors; `values` is non-increasing.
struct SpectralDecomp {
  Matrix vectors;
  Vector values;

  std::size_t dim() const { return static_cast<std::size_t>(values.size()); }
  // U·diag(f)·Uᵀ for per-eigenvalue weights f.
  SymMatrix reconstruct(const Vector& f) const;
  SymMatrix reconstruct() const { return reconstruct(values); }
};

// Symmetric eigendecomposition. Deterministic for a fixed input; ties keep
// the solver's order. Throws DomainError on non-finite input and
// ConvergenceError when the QR sweeps hit the 30·d cap.
SpectralDecomp sym_eig(const SymMatrix& m);

// Smallest |λ_i − λ_{i+1}| over adjacent sorted eigenvalues (+inf for d = 1).
double min_adjacent_gap(const Vector& sorted_values);

}  // namespace pnorm
