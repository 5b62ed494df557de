#pragma once

#include <functional>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "magcorner/sparse_eigen.hpp"

namespace magcorner::grid {

/// Affine vector potential a(y) = M y + c on the plane.
struct LinearPotential {
  Eigen::Matrix2d M = Eigen::Matrix2d::Zero();
  Eigen::Vector2d c = Eigen::Vector2d::Zero();

  Eigen::Vector2d operator()(const Eigen::Vector2d& y) const { return M * y + c; }
  bool is_zero() const { return M.isZero(0.0) && c.isZero(0.0); }
  /// Line integral of a along the segment from r1*e(phi) to r2*e(phi).
  double radial_phase(double phi, double r1, double r2) const;
  /// Line integral of a along the arc of radius r from phi1 to phi2.
  double arc_phase(double r, double phi1, double phi2) const;
};

/// Cell-centered polar grid on the truncated sector
/// { r e(phi) : 0 < r < R, |phi| < alpha/2 }, symmetric about the +y1 axis.
struct PolarGrid {
  double alpha = 0.0;
  double radius = 0.0;
  double dr = 0.0;
  double dphi = 0.0;
  int nr = 0;
  int nphi = 0;

  /// Cells of size about `step` in both directions at the outer radius.
  static PolarGrid make(double alpha, double radius, double step);

  Eigen::Index size() const { return static_cast<Eigen::Index>(nr) * nphi; }
  Eigen::Index index(int i, int j) const { return static_cast<Eigen::Index>(i) * nphi + j; }
  double r(int i) const { return (i + 0.5) * dr; }
  double phi(int j) const { return -0.5 * alpha + (j + 0.5) * dphi; }
  Eigen::Vector2d center(int i, int j) const;
  double area(int i) const { return r(i) * dr * dphi; }
};

template <typename Scalar>
struct SectorSystem {
  PolarGrid grid;
  Eigen::SparseMatrix<Scalar> A;  ///< Hermitian quadratic form of (-i grad + a)^2 + V
  Eigen::VectorXd mass;           ///< cell areas
};

/// Finite-volume assembly with exact link phases, natural Neumann conditions
/// on the two sides and Dirichlet on the arc r = R. Scalar = double requires a
/// vanishing vector potential.
template <typename Scalar>
SectorSystem<Scalar> assemble_sector(const PolarGrid& grid, const LinearPotential& a,
                                     const std::function<double(const Eigen::Vector2d&)>& V = {});

/// Lowest eigenvalues of an assembled sector system.
template <typename Scalar>
linalg::EigenResult<Scalar> solve_sector(const SectorSystem<Scalar>& sys, const linalg::EigenOptions& opts = {});

}  // namespace magcorner::grid
