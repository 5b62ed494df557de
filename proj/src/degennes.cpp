#include "magcorner/degennes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "magcorner/errors.hpp"
#include "magcorner/tridiagonal.hpp"

namespace magcorner::degennes {

double Discretization::length_for(double tau) const {
  return length > 0.0 ? length : std::max(10.0, std::abs(tau) + 8.0);
}

namespace {

// Symmetrized ghost-point matrix. Nodes z_i = i*step, i < n, Dirichlet at z_n = L.
// The first row of the ghost-point scheme is (2u_0 - 2u_1)/step^2; scaling
// u_0 by 1/sqrt(2) makes the matrix symmetric (trapezoid inner product).
linalg::SymTridiagonal assemble(double tau, double step, std::size_t n) {
  linalg::SymTridiagonal t;
  t.diag.resize(n);
  t.off.assign(n - 1, -1.0 / (step * step));
  t.off[0] = -std::sqrt(2.0) / (step * step);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = static_cast<double>(i) * step;
    t.diag[i] = 2.0 / (step * step) + (tau + z) * (tau + z);
  }
  return t;
}

double richardson(double coarse, double fine) { return (4.0 * fine - coarse) / 3.0; }

void attach_decay_certificate(Solution& s) {
  // Gaussian-type decay beyond the well dominates any exponential; certify c = 1.
  s.decay_rate = 1.0;
  double c_const = 0.0;
  for (std::size_t i = 0; i < s.profile.size(); ++i)
    c_const = std::max(c_const, std::abs(s.profile[i]) * std::exp(s.decay_rate * s.z(i)));
  s.decay_constant = c_const;
}

}  // namespace

Solution solve_on_grid(double tau, double step, double length) {
  const auto n = static_cast<std::size_t>(std::llround(length / step));
  if (n < 8) throw NoConvergence("de Gennes grid too coarse");
  const auto t = assemble(tau, step, n);
  Solution s;
  s.tau = tau;
  s.step = step;
  s.length = static_cast<double>(n) * step;
  s.mu = linalg::bisect_eigenvalue(t, 0);
  auto v = linalg::inverse_iteration(t, s.mu);
  s.profile.resize(n);
  const double w0 = std::sqrt(step / 2.0), w = std::sqrt(step);
  s.profile[0] = v[0] / w0;
  for (std::size_t i = 1; i < n; ++i) s.profile[i] = v[i] / w;
  attach_decay_certificate(s);
  return s;
}

Solution mu(double tau, double tol, const Discretization& disc) {
  if (!(tol > 0.0)) throw std::invalid_argument("mu: tol must be positive");
  const double length = disc.length_for(tau);
  double step = disc.step;
  Solution s0 = solve_on_grid(tau, step, length);
  Solution s1 = solve_on_grid(tau, step / 2, length);
  Solution s2 = solve_on_grid(tau, step / 4, length);
  double r_prev = richardson(s0.mu, s1.mu);
  double r = richardson(s1.mu, s2.mu);
  for (int k = 0;; ++k) {
    const double err = std::abs(r - r_prev);
    if (err <= tol) {
      Solution out = std::move(s2);
      out.mu = r;
      out.error_estimate = err;
      return out;
    }
    if (k >= disc.max_refinements)
      throw NoConvergence("de Gennes: Richardson disagreement " + std::to_string(err) + " exceeds tol");
    step /= 2;
    s1 = std::move(s2);
    s2 = solve_on_grid(tau, step / 4, length);
    r_prev = r;
    r = richardson(s1.mu, s2.mu);
  }
}

double fh_moment(const Solution& s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < s.profile.size(); ++i) {
    const double w = (i == 0 ? 0.5 : 1.0) * s.step;
    acc += w * (s.z(i) + s.tau) * s.profile[i] * s.profile[i];
  }
  return acc;
}

bool tail_is_log_concave_decreasing(const Solution& s, double z_from) {
  std::vector<double> logs;
  for (std::size_t i = 0; i < s.profile.size(); ++i) {
    if (s.z(i) < z_from) continue;
    const double a = std::abs(s.profile[i]);
    // Stop before the values reach the floating-point floor.
    if (a < 1e-280) break;
    logs.push_back(std::log(a));
  }
  if (logs.size() < 3) return false;
  // Drop the last few nodes next to the Dirichlet truncation.
  const std::size_t m = logs.size() - std::min<std::size_t>(logs.size() / 10 + 1, logs.size() - 3);
  for (std::size_t i = 1; i < m; ++i) {
    if (logs[i] >= logs[i - 1]) return false;
    if (i + 1 < m && logs[i + 1] - 2 * logs[i] + logs[i - 1] > 1e-9) return false;
  }
  return true;
}

namespace {

struct GridMinimum {
  double tau0;
  double theta0;
};

// Minimum of the discrete band on one grid: locate the root of the discrete
// Feynman-Hellmann moment (= mu'/2) inside a bracket around the guess.
GridMinimum grid_minimum(double guess, double step, double length) {
  auto moment = [&](double tau) { return fh_moment(solve_on_grid(tau, step, length)); };
  double lo = guess - 0.02, hi = guess + 0.02;
  double flo = moment(lo), fhi = moment(hi);
  for (int widen = 0; flo * fhi > 0 && widen < 20; ++widen) {
    lo -= 0.05;
    hi += 0.05;
    flo = moment(lo);
    fhi = moment(hi);
  }
  if (flo * fhi > 0) throw NoConvergence("theta0: no sign change of the Feynman-Hellmann moment");
  boost::uintmax_t iters = 100;
  auto r = boost::math::tools::toms748_solve(
      moment, lo, hi, flo, fhi, [](double a, double b) { return std::abs(b - a) <= 1e-15; }, iters);
  const double tau0 = 0.5 * (r.first + r.second);
  return {tau0, solve_on_grid(tau0, step, length).mu};
}

}  // namespace

Theta0 theta0(double tol, const Discretization& disc) {
  if (!(tol > 0.0)) throw std::invalid_argument("theta0: tol must be positive");
  // Unimodal bracket [-3, 0]: golden-section/Brent on a coarse grid first.
  const double length = disc.length_for(-3.0);
  const double coarse = disc.step * 4;
  auto coarse_mu = [&](double tau) { return solve_on_grid(tau, coarse, length).mu; };
  auto [guess, unused] = boost::math::tools::brent_find_minima(coarse_mu, -3.0, 0.0, 30);
  (void)unused;

  double step = disc.step;
  GridMinimum g0 = grid_minimum(guess, step, length);
  GridMinimum g1 = grid_minimum(g0.tau0, step / 2, length);
  GridMinimum g2 = grid_minimum(g1.tau0, step / 4, length);
  for (int k = 0;; ++k) {
    const double th_prev = richardson(g0.theta0, g1.theta0), th = richardson(g1.theta0, g2.theta0);
    const double ta_prev = richardson(g0.tau0, g1.tau0), ta = richardson(g1.tau0, g2.tau0);
    const double err = std::max(std::abs(th - th_prev), std::abs(ta - ta_prev));
    if (err <= tol) return {th, ta, err};
    if (k >= disc.max_refinements)
      throw NoConvergence("theta0: Richardson disagreement " + std::to_string(err) + " exceeds tol");
    step /= 2;
    g0 = g1;
    g1 = g2;
    g2 = grid_minimum(g1.tau0, step / 4, length);
  }
}

const Theta0& theta0_default() {
  static std::once_flag once;
  static Theta0 value;
  std::call_once(once, [] { value = theta0(1e-8); });
  return value;
}

}  // namespace magcorner::degennes
