#pragma once

#include <functional>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace magcorner::grid {

/// Cell-centered rectangle [x_lo, x_hi] x [0, y_hi] with independent steps.
/// The side y = 0 is Neumann (natural), the other three are Dirichlet.
struct RectGrid {
  double x_lo = 0.0, x_hi = 0.0, y_hi = 0.0;
  double hx = 0.0, hy = 0.0;
  int nx = 0, ny = 0;

  static RectGrid make(double x_lo, double x_hi, double y_hi, double hx, double hy);

  Eigen::Index size() const { return static_cast<Eigen::Index>(nx) * ny; }
  Eigen::Index index(int i, int j) const { return static_cast<Eigen::Index>(j) * nx + i; }
  double x(int i) const { return x_lo + (i + 0.5) * hx; }
  double y(int j) const { return (j + 0.5) * hy; }
};

struct RectSystem {
  RectGrid grid;
  Eigen::SparseMatrix<double> A;  ///< quadratic form of -Laplacian + V
  Eigen::VectorXd mass;
};

RectSystem assemble_rect(const RectGrid& grid, const std::function<double(double, double)>& V);

}  // namespace magcorner::grid
