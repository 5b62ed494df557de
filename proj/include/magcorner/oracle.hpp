#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "magcorner/energy.hpp"
#include "magcorner/geometry.hpp"

namespace magcorner::oracle {

/// Planar vector potential with polynomial components of degree at most 3.
struct Gauge {
  /// Monomials in order: 1, x, y, xx, xy, yy, xxx, xxy, xyy, yyy.
  std::array<std::array<double, 10>, 2> coeffs{};

  Eigen::Vector2d operator()(const Eigen::Vector2d& p) const;
  /// Line integral along the segment p -> q; Simpson's rule is exact here.
  double line_integral(const Eigen::Vector2d& p, const Eigen::Vector2d& q) const;
  double curl(const Eigen::Vector2d& p) const;

  /// A = b/2 (-(y - cy), x - cx).
  static Gauge symmetric(double b, const Eigen::Vector2d& center = Eigen::Vector2d::Zero());
  /// A with curl A equal to the e3 component of a polynomial field: A = (0, int_0^x b).
  static Gauge from_field(const energy::FieldSpec& field);
  /// A + grad(phi) for phi = sum c_k m_k over the monomials 1, x, y, xx, xy, yy.
  Gauge shifted(const std::array<double, 6>& phi) const;
  Gauge scaled(double s) const;
};

struct Mesh {
  std::vector<Eigen::Vector2d> nodes;
  std::vector<std::array<int, 3>> triangles;
};

/// Fan from the vertex centroid, each fan triangle refined uniformly so that
/// edges are at most `step` long. Throws MeshFailure unless the polygon is
/// star-shaped with respect to its vertex centroid.
Mesh mesh_polygon(const geometry::CornerDomain& polygon, double step);

struct MagneticSystem {
  Eigen::SparseMatrix<std::complex<double>> A;  ///< h^2 sum w |e^{i theta/h} u_q - u_p|^2
  Eigen::VectorXd mass;                         ///< lumped barycentric areas
};

/// Cotangent-weight magnetic Laplacian with exact link phases. Neumann
/// conditions are natural.
MagneticSystem assemble(const Mesh& mesh, const Gauge& gauge, double h);

struct RefinementLevel {
  double step = 0.0;
  long unknowns = 0;
  double lambda = 0.0;
};

struct OracleResult {
  Gauge gauge;
  double h = 0.0;
  double step = 0.0;            ///< middle grid step of the study
  double lambda = 0.0;          ///< Richardson value over the refinement history
  double lambda_over_h = 0.0;
  double error_estimate = 0.0;  ///< grid tolerance of the run
  std::vector<RefinementLevel> history;
};

/// Smallest eigenvalue of the discrete (-ih grad + A)^2 with Neumann
/// conditions on steps 2*step, step, step/2. step = 0 selects min(h/4, 1/64).
OracleResult fd_eigensolve_2d(const geometry::CornerDomain& polygon, const Gauge& gauge, double h, double step = 0.0);

struct StudyRow {
  double h = 0.0;
  double lambda = 0.0;
  double lambda_over_h = 0.0;
  double deviation = 0.0;       ///< lambda/h - E
  double grid_error = 0.0;
  double gauge_difference = 0.0;  ///< |lambda(A + grad phi) - lambda(A)|
  bool gauge_ok = false;          ///< within 5x the grid tolerance
  bool noisy = false;             ///< |deviation| not above the grid error / h
  double step = 0.0;
};

struct StudyTable {
  double E = 0.0;
  std::vector<StudyRow> rows;
  double fitted_rate = 0.0;  ///< log-log slope of |deviation| against h
  bool deviations_decrease = false;
  double c_upper = 0.0;      ///< empirical sandwich constant for h^{1/4}, from the two coarsest runs
  bool sandwich_ok = false;
};

/// Runs the oracle for each h (descending, at least three) and compares to E.
StudyTable convergence_study(const geometry::CornerDomain& polygon, const energy::FieldSpec& field,
                             const std::vector<double>& h_list, double E);

}  // namespace magcorner::oracle
