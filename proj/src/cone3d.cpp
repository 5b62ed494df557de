#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Geometry>
#include <Eigen/SparseCore>

#include "magcorner/energy.hpp"
#include "magcorner/errors.hpp"
#include "magcorner/sparse_eigen.hpp"

namespace magcorner::energy {

namespace {

using linalg::Complex;

void check_budget(long n, const Options& opt) {
  if (n > opt.cone3d_budget)
    throw ResourceLimit("3D grid with " + std::to_string(n) + " unknowns exceeds the budget of " +
                        std::to_string(opt.cone3d_budget));
}

/// Cell-centered grid on [0, L]^3: Neumann on the coordinate planes, Dirichlet
/// on the far faces, gauge A = b x u / 2 with exact link phases.
double octant_level(const Vec3& b, double L, int n) {
  const double h = L / n;
  auto idx = [n](int i, int j, int k) { return (static_cast<Eigen::Index>(k) * n + j) * n + i; };
  const Eigen::Index N = static_cast<Eigen::Index>(n) * n * n;
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(static_cast<std::size_t>(N) * 7);
  std::vector<double> diag(static_cast<std::size_t>(N), 0.0);
  auto center = [h](int i, int j, int k) { return Vec3((i + 0.5) * h, (j + 0.5) * h, (k + 0.5) * h); };
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const Eigen::Index p = idx(i, j, k);
        const Vec3 x = center(i, j, k);
        const int ijk[3] = {i, j, k};
        for (int d = 0; d < 3; ++d) {
          if (ijk[d] + 1 == n) {
            diag[static_cast<std::size_t>(p)] += 2.0 * h;
            continue;
          }
          int nb[3] = {i, j, k};
          nb[d] += 1;
          const Eigen::Index q = idx(nb[0], nb[1], nb[2]);
          const Vec3 y = center(nb[0], nb[1], nb[2]);
          // Linear potential: the midpoint rule is exact on the segment.
          const double theta = (0.5 * b.cross(0.5 * (x + y))).dot(y - x);
          diag[static_cast<std::size_t>(p)] += h;
          diag[static_cast<std::size_t>(q)] += h;
          const Complex f = std::polar(1.0, theta);
          trip.emplace_back(p, q, -h * f);
          trip.emplace_back(q, p, -h * std::conj(f));
        }
      }
  for (Eigen::Index p = 0; p < N; ++p) trip.emplace_back(p, p, diag[static_cast<std::size_t>(p)]);
  Eigen::SparseMatrix<Complex> A(N, N);
  A.setFromTriplets(trip.begin(), trip.end());
  const Eigen::VectorXd mass = Eigen::VectorXd::Constant(N, h * h * h);
  return linalg::lowest_eigenpairs(A, mass).values[0];
}

/// Meridian problem of the circular cone {angle to axis < alpha} for the
/// angular mode m, in spherical coordinates (r, psi), unit axial field.
double axisymmetric_level(double alpha, int m, double R, double step) {
  const int nr = static_cast<int>(std::ceil(R / step));
  const int np = std::max(4, static_cast<int>(std::ceil(alpha * R / step)));
  const double dr = R / nr, dp = alpha / np;
  auto idx = [np](int i, int j) { return static_cast<Eigen::Index>(i) * np + j; };
  const Eigen::Index N = static_cast<Eigen::Index>(nr) * np;
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd mass(N), diag = Eigen::VectorXd::Zero(N);
  for (int i = 0; i < nr; ++i) {
    const double r = (i + 0.5) * dr;
    for (int j = 0; j < np; ++j) {
      const double psi = (j + 0.5) * dp;
      const Eigen::Index p = idx(i, j);
      const double rho = r * std::sin(psi);
      const double v = m / rho + 0.5 * rho;
      mass[p] = r * r * std::sin(psi) * dr * dp;
      diag[p] += v * v * mass[p];
      if (i + 1 < nr) {
        const double rh = (i + 1) * dr;
        const double w = rh * rh * std::sin(psi) * dp / dr;
        diag[p] += w;
        diag[idx(i + 1, j)] += w;
        trip.emplace_back(p, idx(i + 1, j), -w);
        trip.emplace_back(idx(i + 1, j), p, -w);
      } else {
        diag[p] += R * R * std::sin(psi) * dp / (0.5 * dr);
      }
      if (j + 1 < np) {
        const double w = dr * std::sin((j + 1) * dp) / dp;
        diag[p] += w;
        diag[idx(i, j + 1)] += w;
        trip.emplace_back(p, idx(i, j + 1), -w);
        trip.emplace_back(idx(i, j + 1), p, -w);
      }
    }
  }
  for (Eigen::Index p = 0; p < N; ++p) trip.emplace_back(p, p, diag[p]);
  Eigen::SparseMatrix<double> A(N, N);
  A.setFromTriplets(trip.begin(), trip.end());
  return linalg::lowest_eigenpairs(A, mass).values[0];
}

}  // namespace

double cone3d_energy_upper(const Vec3& B, const geometry::ConeDescriptor& cone, const Options& opt) {
  using geometry::SectionKind;
  if (cone.kind != geometry::ConeKind::Cone3D) throw UnsupportedGeometry("3D solve needs a 3D cone");
  const double m = B.norm();
  if (m == 0.0) throw ZeroField();
  const Vec3 b = B / m;

  if (cone.section == SectionKind::Polygon) {
    if (cone.rays.size() != 3) throw UnsupportedGeometry("3D solve supports octant-type cones only");
    for (int a = 0; a < 3; ++a)
      if (std::abs(cone.rays[a].dot(cone.rays[(a + 1) % 3])) > 1e-10)
        throw UnsupportedGeometry("3D solve supports octant-type cones only");
    Eigen::Matrix3d Q;
    for (int a = 0; a < 3; ++a) Q.col(a) = cone.rays[a];
    // B is a pseudo-vector: a reflection flips its sign.
    const Vec3 local = Q.determinant() * (Q.transpose() * b);
    const double L = 6.0;
    const int n = 24;
    check_budget(static_cast<long>(n) * n * n, opt);
    const double coarse = octant_level(local, L, n);
    if (8L * n * n * n > opt.cone3d_budget) return m * coarse;
    const double fine = octant_level(local, L, 2 * n);
    return m * (4.0 * fine - coarse) / 3.0;
  }

  if (b.cross(cone.axis).norm() > 1e-10)
    throw UnsupportedGeometry("3D solve on circular cones needs the field along the axis");
  const double R = 12.0, step = 1.0 / 16.0;
  check_budget(static_cast<long>(std::ceil(R / step)) * std::max(4L, static_cast<long>(std::ceil(cone.aperture * R / step))),
               opt);
  double best = std::numeric_limits<double>::infinity();
  for (int k = -3; k <= 3; ++k) {
    const double a = axisymmetric_level(cone.aperture, k, R, 2 * step);
    const double c = axisymmetric_level(cone.aperture, k, R, step);
    best = std::min(best, (4.0 * c - a) / 3.0);
  }
  return m * best;
}

}  // namespace magcorner::energy
