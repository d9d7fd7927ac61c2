#include "pnorm/eig.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

#include "pnorm/errors.hpp"

namespace pnorm {

SymMatrix SpectralDecomp::reconstruct(const Vector& f) const {
  return SymMatrix(vectors * f.asDiagonal() * vectors.transpose());
}

SpectralDecomp sym_eig(const SymMatrix& m) {
  if (!m.is_finite()) throw DomainError("sym_eig: matrix has non-finite entries");

  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "sym_eig: no convergence within 30*d sweeps (d=" << m.dim()
        << ", ||M||_F=" << m.norm() << ")";
    throw ConvergenceError(msg.str());
  }

  // Eigen returns ascending values; reorder to non-increasing, stable on ties.
  const Eigen::Index d = solver.eigenvalues().size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const Vector& ev = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return ev(a) > ev(b); });

  SpectralDecomp out;
  out.values.resize(d);
  out.vectors.resize(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    out.values(k) = ev(order[static_cast<std::size_t>(k)]);
    out.vectors.col(k) = solver.eigenvectors().col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

double min_adjacent_gap(const Vector& sorted_values) {
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i + 1 < sorted_values.size(); ++i) {
    gap = std::min(gap, std::abs(sorted_values(i) - sorted_values(i + 1)));
  }
  return gap;
}

}  // namespace pnorm
