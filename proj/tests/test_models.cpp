#include <cmath>

#include <doctest.h>

#include "magcorner/degennes.hpp"
#include "magcorner/errors.hpp"
#include "magcorner/planar_models.hpp"

using namespace magcorner;
using namespace magcorner::models;

namespace {

double theta0() { return degennes::theta0_default().theta0; }

Context coarse() {
  Context c;
  c.disc.step = 1.0 / 4.0;
  return c;
}

}  // namespace

TEST_CASE("sigma endpoints are exact") {
  CHECK(sigma(0.0).value == theta0());
  CHECK(sigma(M_PI / 2).value == 1.0);
  CHECK_THROWS_AS(sigma(-0.1), InvalidDomain);
  CHECK_THROWS_AS(sigma(2.0), InvalidDomain);
}

TEST_CASE("sigma(pi/4) lies strictly between Theta0 and 1 and is grid independent") {
  const auto fine = sigma(M_PI / 4);
  const auto rough = sigma(M_PI / 4, 1e-4, coarse());
  CHECK(fine.value > theta0() + 1e-3);
  CHECK(fine.value < 1.0 - 1e-3);
  CHECK(std::abs(fine.value - rough.value) < 10 * 1e-4);
  CHECK(fine.mode.certified);
  CHECK(fine.mode.decay_rate > 0.0);
}

TEST_CASE("sigma is increasing on a few samples") {
  double prev = theta0();
  for (double t : {0.1, 0.4, 0.8, 1.2}) {
    const double s = sigma(t).value;
    CHECK(s > prev);
    prev = s;
  }
  CHECK(prev < 1.0);
}

TEST_CASE("sector energies") {
  const auto half = sector_energy(M_PI);
  CHECK(std::abs(half.value - theta0()) < 1e-3);

  const auto right = sector_energy(M_PI / 2);
  CHECK(right.value < theta0() - 1e-3);
  CHECK_FALSE(right.has(kClamped));

  // Gauge invariance: symmetric and Landau potentials give the same spectrum.
  const auto landau = sector_energy(M_PI / 2, 1e-4, {}, SectorGauge::Landau);
  CHECK(std::abs(landau.value - right.value) < 1e-4 + right.error_estimate + landau.error_estimate);

  // Two-resolution cross-check and ordering against pi/2.
  const auto third = sector_energy(M_PI / 3);
  const auto third_rough = sector_energy(M_PI / 3, 1e-4, coarse());
  CHECK(third.value < right.value);
  CHECK(std::abs(third.value - third_rough.value) < 1e-3);

  const auto ev = sector_eigenvalues(M_PI / 2, 2);
  REQUIRE(ev.size() == 2);
  CHECK(ev[0] == doctest::Approx(right.raw).epsilon(1e-6));
  CHECK(ev[1] > ev[0]);
}

TEST_CASE("wedge fiber is grid independent") {
  const auto a = wedge_fiber(M_PI / 2, Eigen::Vector3d(0, 1, 0), 0.0);
  const auto b = wedge_fiber(M_PI / 2, Eigen::Vector3d(0, 1, 0), 0.0, 1e-4, coarse());
  CHECK(std::abs(a.value - b.value) < 1e-3);
  CHECK(a.value > 0.0);
}

TEST_CASE("wedge energies") {
  SUBCASE("field tangent to the edge: the sector, case (i)") {
    const auto w = wedge_energy(M_PI / 2, Eigen::Vector3d(1, 0, 0));
    CHECK(w.value == doctest::Approx(sector_energy(M_PI / 2).value).epsilon(1e-9));
    CHECK(w.e_star == theta0());
    CHECK(w.age.has_value());
  }
  SUBCASE("field tangent to a face and normal to the edge: Theta0") {
    const auto [tp, tm] = wedge_face_angles(M_PI / 2, Eigen::Vector3d(0, 1, 1).normalized());
    CHECK(std::min(tp, tm) == doctest::Approx(0.0).epsilon(1e-12));
    const auto w = wedge_energy(M_PI / 2, Eigen::Vector3d(0, 1, 1).normalized());
    CHECK(std::abs(w.value - theta0()) < 1e-3);
  }
  SUBCASE("oblique field stays below the face energy") {
    const Eigen::Vector3d b = Eigen::Vector3d(1, 1, 1).normalized();
    const auto w = wedge_energy(M_PI / 2, b);
    const auto [tp, tm] = wedge_face_angles(M_PI / 2, b);
    CHECK(w.value <= sigma(std::min(tp, tm)).value + 1e-3);
    CHECK(w.e_star == doctest::Approx(sigma(std::min(tp, tm)).value));
  }
}

TEST_CASE("half-space energies and generalized eigenvectors") {
  const Eigen::Vector3d n(0, 0, 1);
  const auto tangent = halfspace_energy(Eigen::Vector3d(1, 0, 0), n);
  CHECK(tangent.value == theta0());
  REQUIRE(tangent.age);
  CHECK(tangent.age->k == 1);
  CHECK(tangent.age->phase == "exp(-i sqrt(Theta0) y1)");

  const auto normal = halfspace_energy(Eigen::Vector3d(0, 0, 1), n);
  CHECK(normal.value == 1.0);
  CHECK_FALSE(normal.age);

  CHECK(halfspace_energy(Eigen::Vector3d(2, 0, 0), n).value == doctest::Approx(2 * theta0()));

  const auto oblique = halfspace_energy(Eigen::Vector3d(1, 0, 1), n);
  REQUIRE(oblique.age);
  CHECK(oblique.age->k == 2);

  const auto full = age_descriptor(Eigen::Vector3d::UnitZ(), geometry::ConeDescriptor::full_space());
  CHECK(full.k == 2);
  CHECK(full.d == 0);
  CHECK(full.energy == 1.0);
}
