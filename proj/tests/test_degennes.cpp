#include <cmath>

#include <doctest.h>

#include "magcorner/degennes.hpp"

namespace dg = magcorner::degennes;

namespace {

/// Independent oracle: RK4 shooting of -u'' + (tau + z)^2 u = mu u from the
/// Neumann end, with mu located by bisection on the sign of u(L).
double shoot(double tau, double mu, double L, int n) {
  const double h = L / n;
  double z = 0.0, u = 1.0, v = 0.0;
  auto f = [&](double zz, double uu) { return ((tau + zz) * (tau + zz) - mu) * uu; };
  for (int i = 0; i < n; ++i) {
    const double k1u = v, k1v = f(z, u);
    const double k2u = v + 0.5 * h * k1v, k2v = f(z + 0.5 * h, u + 0.5 * h * k1u);
    const double k3u = v + 0.5 * h * k2v, k3v = f(z + 0.5 * h, u + 0.5 * h * k2u);
    const double k4u = v + h * k3v, k4v = f(z + h, u + h * k3u);
    u += h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
    v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
    z += h;
  }
  return u;
}

double shooting_mu(double tau) {
  // The ground level has no sign change of u on [0, L]; u(L) flips sign as mu crosses it.
  double lo = 0.0, hi = 2.5;
  const double L = 9.0;
  const double s_lo = shoot(tau, lo, L, 20000);
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (shoot(tau, mid, L, 20000) * s_lo > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("mu(0) is the harmonic oscillator ground level") {
  CHECK(dg::mu(0.0).mu == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("mu(-2) agrees with an independent shooting discretization") {
  const auto s = dg::mu(-2.0, 1e-9);
  CHECK(std::abs(s.mu - shooting_mu(-2.0)) < 1e-7);
  CHECK(s.error_estimate < 1e-8);
}

TEST_CASE("mu tends to the Landau level 1 for very negative tau and grows like tau^2 for positive tau") {
  CHECK(dg::mu(-7.0).mu == doctest::Approx(1.0).epsilon(1e-7));
  // Airy regime: tau^2 + |a'_1| (2 tau)^{2/3} with a'_1 the first zero of Ai'.
  const double airy = 16.0 + 1.0188 * std::pow(8.0, 2.0 / 3.0);
  CHECK(std::abs(dg::mu(4.0).mu - airy) < 0.3);
}

TEST_CASE("Theta0 and tau0") {
  const auto t = dg::theta0();
  CHECK(t.theta0 > 0.585);
  CHECK(t.theta0 < 0.595);
  CHECK(std::abs(t.theta0 - t.tau0 * t.tau0) < 1e-6);
  CHECK(t.tau0 > -3.0);
  CHECK(t.tau0 < 0.0);
  // The minimum of mu: neighbours are higher.
  CHECK(dg::mu(t.tau0 - 0.05).mu > t.theta0);
  CHECK(dg::mu(t.tau0 + 0.05).mu > t.theta0);
  CHECK(std::abs(shooting_mu(t.tau0) - t.theta0) < 1e-7);
}

TEST_CASE("Feynman-Hellmann moment") {
  const auto t = dg::theta0();
  const auto at0 = dg::mu(t.tau0);
  CHECK(std::abs(dg::fh_moment(at0)) < 1e-6);
  CHECK(dg::fh_moment(dg::mu(0.0)) > 0.0);

  // On the discrete operator the moment is mu'(tau)/2; compare to a centred difference.
  const double d = 1e-3;
  const auto plus = dg::solve_on_grid(-1.5 + d, 1.0 / 256, 10.0);
  const auto minus = dg::solve_on_grid(-1.5 - d, 1.0 / 256, 10.0);
  const auto mid = dg::solve_on_grid(-1.5, 1.0 / 256, 10.0);
  CHECK(dg::fh_moment(mid) == doctest::Approx((plus.mu - minus.mu) / (4 * d)).epsilon(1e-3));
}

TEST_CASE("moment at tau0 shrinks under grid refinement") {
  const double tau0 = dg::theta0().tau0;
  const double coarse = std::abs(dg::fh_moment(dg::solve_on_grid(tau0, 1.0 / 64, 10.0)));
  const double fine = std::abs(dg::fh_moment(dg::solve_on_grid(tau0, 1.0 / 128, 10.0)));
  CHECK(fine < coarse);
}

TEST_CASE("eigenfunction profile decays exponentially with a log-concave tail") {
  const auto s = dg::mu(dg::theta0().tau0);
  CHECK(s.decay_rate > 0.0);
  CHECK(s.decay_constant > 0.0);
  for (std::size_t i = 0; i < s.profile.size(); i += 97)
    CHECK(std::abs(s.profile[i]) <= s.decay_constant * std::exp(-s.decay_rate * s.z(i)) + 1e-12);
  CHECK(dg::tail_is_log_concave_decreasing(s, 2.0));
}
