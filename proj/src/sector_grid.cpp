#include "magcorner/sector_grid.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace magcorner::grid {

double LinearPotential::radial_phase(double phi, double r1, double r2) const {
  const Eigen::Vector2d e(std::cos(phi), std::sin(phi));
  return e.dot(M * e) * 0.5 * (r2 * r2 - r1 * r1) + e.dot(c) * (r2 - r1);
}

double LinearPotential::arc_phase(double r, double phi1, double phi2) const {
  const double s1 = std::sin(phi1), s2 = std::sin(phi2);
  const double c1 = std::cos(phi1), c2 = std::cos(phi2);
  const double int_sc = 0.5 * (s2 * s2 - s1 * s1);
  const double int_ss = 0.5 * (phi2 - phi1) - 0.25 * (std::sin(2 * phi2) - std::sin(2 * phi1));
  const double int_cc = 0.5 * (phi2 - phi1) + 0.25 * (std::sin(2 * phi2) - std::sin(2 * phi1));
  // t . M e with t = (-sin, cos), e = (cos, sin).
  const double quad = (M(1, 1) - M(0, 0)) * int_sc - M(0, 1) * int_ss + M(1, 0) * int_cc;
  const double lin = c(0) * (c2 - c1) + c(1) * (s2 - s1);
  return r * r * quad + r * lin;
}

PolarGrid PolarGrid::make(double alpha, double radius, double step) {
  if (!(alpha > 0.0 && alpha < 2.0 * M_PI)) throw std::invalid_argument("PolarGrid: opening out of range");
  if (!(radius > 0.0 && step > 0.0)) throw std::invalid_argument("PolarGrid: radius and step must be positive");
  PolarGrid g;
  g.alpha = alpha;
  g.radius = radius;
  g.nr = static_cast<int>(std::ceil(radius / step - 1e-9));
  g.nphi = std::max(2, static_cast<int>(std::ceil(alpha * radius / step - 1e-9)));
  g.dr = radius / g.nr;
  g.dphi = alpha / g.nphi;
  return g;
}

Eigen::Vector2d PolarGrid::center(int i, int j) const {
  const double rr = r(i), p = phi(j);
  return {rr * std::cos(p), rr * std::sin(p)};
}

namespace {

template <typename Scalar>
Scalar link_factor(double theta) {
  if constexpr (std::is_same_v<Scalar, double>)
    return 1.0;
  else
    return std::polar(1.0, theta);
}

}  // namespace

template <typename Scalar>
SectorSystem<Scalar> assemble_sector(const PolarGrid& g, const LinearPotential& a,
                                     const std::function<double(const Eigen::Vector2d&)>& V) {
  if constexpr (std::is_same_v<Scalar, double>) {
    if (!a.is_zero()) throw std::invalid_argument("assemble_sector: real assembly needs a zero vector potential");
  }
  SectorSystem<Scalar> sys;
  sys.grid = g;
  const Eigen::Index n = g.size();
  sys.mass.resize(n);
  std::vector<Eigen::Triplet<Scalar>> trip;
  trip.reserve(static_cast<std::size_t>(n) * 5);
  std::vector<double> diag(static_cast<std::size_t>(n), 0.0);

  auto link = [&](Eigen::Index x, Eigen::Index y, double w, double theta) {
    diag[x] += w;
    diag[y] += w;
    const Scalar f = link_factor<Scalar>(theta);
    trip.emplace_back(x, y, -w * f);
    trip.emplace_back(y, x, -w * Eigen::numext::conj(f));
  };

  for (int i = 0; i < g.nr; ++i) {
    const double ri = g.r(i);
    for (int j = 0; j < g.nphi; ++j) {
      const Eigen::Index x = g.index(i, j);
      sys.mass[x] = g.area(i);
      if (V) diag[x] += V(g.center(i, j)) * g.area(i);
      if (i + 1 < g.nr) {
        const double w = (ri + 0.5 * g.dr) * g.dphi / g.dr;
        link(x, g.index(i + 1, j), w, a.radial_phase(g.phi(j), ri, g.r(i + 1)));
      } else {
        diag[x] += g.radius * g.dphi / (0.5 * g.dr);
      }
      if (j + 1 < g.nphi) {
        const double w = g.dr / (ri * g.dphi);
        link(x, g.index(i, j + 1), w, a.arc_phase(ri, g.phi(j), g.phi(j + 1)));
      }
    }
  }
  for (Eigen::Index x = 0; x < n; ++x) trip.emplace_back(x, x, Scalar(diag[x]));
  sys.A.resize(n, n);
  sys.A.setFromTriplets(trip.begin(), trip.end());
  sys.A.makeCompressed();
  return sys;
}

template <typename Scalar>
linalg::EigenResult<Scalar> solve_sector(const SectorSystem<Scalar>& sys, const linalg::EigenOptions& opts) {
  return linalg::lowest_eigenpairs(sys.A, sys.mass, opts);
}

template SectorSystem<double> assemble_sector<double>(const PolarGrid&, const LinearPotential&,
                                                      const std::function<double(const Eigen::Vector2d&)>&);
template SectorSystem<linalg::Complex> assemble_sector<linalg::Complex>(
    const PolarGrid&, const LinearPotential&, const std::function<double(const Eigen::Vector2d&)>&);
template linalg::EigenResult<double> solve_sector<double>(const SectorSystem<double>&, const linalg::EigenOptions&);
template linalg::EigenResult<linalg::Complex> solve_sector<linalg::Complex>(const SectorSystem<linalg::Complex>&,
                                                                            const linalg::EigenOptions&);

}  // namespace magcorner::grid
