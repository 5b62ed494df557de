#pragma once

#include <vector>

namespace magcorner::degennes {

/// Discretization of -d^2/dz^2 + (tau + z)^2 on [0, L]: Neumann at 0 through a
/// ghost node, Dirichlet at L, second-order centered differences.
struct Discretization {
  double step = 1.0 / 512.0;  ///< coarsest grid step; two halvings are used for Richardson
  double length = 0.0;        ///< truncation length; 0 selects max(10, |tau| + 8)
  int max_refinements = 4;    ///< extra halvings allowed before NoConvergence

  double length_for(double tau) const;
};

/// First eigenpair of the de Gennes operator at one value of tau.
struct Solution {
  double tau = 0.0;
  double mu = 0.0;              ///< Richardson-extrapolated first eigenvalue
  double error_estimate = 0.0;  ///< |difference of two successive Richardson values|
  double step = 0.0;            ///< step of the grid carrying the profile
  double length = 0.0;
  int scheme_order = 2;
  std::vector<double> profile;  ///< Phi(z_i), z_i = i * step, unit L2 norm (trapezoid)
  double decay_rate = 1.0;      ///< c in |Phi(z)| <= C exp(-c z)
  double decay_constant = 0.0;  ///< C, checked on every sample of the grid

  double z(std::size_t i) const { return static_cast<double>(i) * step; }
};

/// Eigenpair on a single grid (no extrapolation). Exposed for refinement
/// studies and for the oracle tests.
Solution solve_on_grid(double tau, double step, double length);

/// mu(tau) with |error| <= tol certified by Richardson extrapolation over two
/// successive grid halvings. Throws NoConvergence if the refinement cap is hit.
Solution mu(double tau, double tol = 1e-8, const Discretization& disc = {});

struct Theta0 {
  double theta0 = 0.0;
  double tau0 = 0.0;
  double error_estimate = 0.0;
};

/// Minimum Theta0 of mu and its location tau0 (= -sqrt(Theta0)).
Theta0 theta0(double tol = 1e-8, const Discretization& disc = {});

/// Cached theta0() at the default tolerance; computed once per process.
const Theta0& theta0_default();

/// Trapezoid quadrature of int_0^L (z + tau) |Phi(z)|^2 dz on the solution grid.
/// On the discrete operator this is exactly mu'(tau) / 2.
double fh_moment(const Solution& solution);

/// True when log|Phi| is decreasing and concave on the tail z >= z_from.
bool tail_is_log_concave_decreasing(const Solution& solution, double z_from);

}  // namespace magcorner::degennes
