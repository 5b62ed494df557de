#include "magcorner/halfplane_grid.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace magcorner::grid {

RectGrid RectGrid::make(double x_lo, double x_hi, double y_hi, double hx, double hy) {
  if (!(x_hi > x_lo && y_hi > 0 && hx > 0 && hy > 0)) throw std::invalid_argument("RectGrid: bad extents");
  RectGrid g;
  g.x_lo = x_lo;
  g.x_hi = x_hi;
  g.y_hi = y_hi;
  g.nx = static_cast<int>(std::ceil((x_hi - x_lo) / hx - 1e-9));
  g.ny = static_cast<int>(std::ceil(y_hi / hy - 1e-9));
  g.hx = (x_hi - x_lo) / g.nx;
  g.hy = y_hi / g.ny;
  return g;
}

RectSystem assemble_rect(const RectGrid& g, const std::function<double(double, double)>& V) {
  RectSystem sys;
  sys.grid = g;
  const Eigen::Index n = g.size();
  const double cell = g.hx * g.hy;
  const double wx = g.hy / g.hx, wy = g.hx / g.hy;
  sys.mass = Eigen::VectorXd::Constant(n, cell);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(n) * 5);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const Eigen::Index p = g.index(i, j);
      double d = V ? V(g.x(i), g.y(j)) * cell : 0.0;
      // Left/right neighbours, Dirichlet half cells at x_lo and x_hi.
      d += (i > 0 ? wx : 2 * wx) + (i + 1 < g.nx ? wx : 2 * wx);
      if (i + 1 < g.nx) {
        trip.emplace_back(p, g.index(i + 1, j), -wx);
        trip.emplace_back(g.index(i + 1, j), p, -wx);
      }
      // Bottom is Neumann; top is Dirichlet.
      if (j > 0) d += wy;
      d += (j + 1 < g.ny ? wy : 2 * wy);
      if (j + 1 < g.ny) {
        trip.emplace_back(p, g.index(i, j + 1), -wy);
        trip.emplace_back(g.index(i, j + 1), p, -wy);
      }
      trip.emplace_back(p, p, d);
    }
  }
  sys.A.resize(n, n);
  sys.A.setFromTriplets(trip.begin(), trip.end());
  sys.A.makeCompressed();
  return sys;
}

}  // namespace magcorner::grid
