#include <cmath>

#include <doctest.h>
#include <Eigen/Geometry>

#include "magcorner/degennes.hpp"
#include "magcorner/energy.hpp"
#include "magcorner/errors.hpp"
#include "magcorner/io.hpp"

using namespace magcorner;
using namespace magcorner::energy;
using geometry::ConeDescriptor;
using geometry::ConeKind;

namespace {

std::string fixture(const char* name) { return std::string(MAGCORNER_FIXTURES) + "/" + name; }
double theta0() { return degennes::theta0_default().theta0; }
double sector_right() { return models::sector_energy(M_PI / 2).value; }
ConeDescriptor octant() { return ConeDescriptor::polyhedral_cone({Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()}); }

}  // namespace

TEST_CASE("local energies of the model cones") {
  CHECK(local_energy(Vec3(0, 0, 1), ConeDescriptor::full_space()).E == 1.0);
  CHECK(local_energy(Vec3::Zero(), octant()).E == 0.0);
  CHECK(local_energy(Vec3::Zero(), ConeDescriptor::half_space(Vec3::UnitZ())).E == 0.0);
  const auto w = local_energy(Vec3(0, 0, 1), ConeDescriptor::wedge(M_PI / 2, Vec3::UnitZ(), Vec3(1, 1, 0)));
  CHECK(w.E == doctest::Approx(sector_right()).epsilon(1e-9));
}

TEST_CASE("substructure energies") {
  CHECK(energy_star(Vec3(0, 0, 1), ConeDescriptor::half_space(Vec3::UnitZ())) == 1.0);
  CHECK(std::isinf(energy_star(Vec3(0, 0, 1), ConeDescriptor::full_space())));
  CHECK(energy_star(Vec3(0, 0, 1), ConeDescriptor::wedge(M_PI / 2, Vec3::UnitZ(), Vec3(1, 1, 0))) == theta0());

  // B tangent to the face z = 0 of the octant, along no edge: E* is the least
  // of the length-2 classes, here the three edge wedges and three faces.
  const Vec3 b = Vec3(1, 2, 0).normalized();
  double expected = std::numeric_limits<double>::infinity();
  const auto oct = octant();
  for (const auto& chain : geometry::enumerate_chain_classes(oct).classes)
    if (chain.length() == 2) expected = std::min(expected, chain_energy(b, chain));
  CHECK(energy_star(b, oct) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected <= theta0());
}

TEST_CASE("dichotomy fixtures") {
  const auto tangent = dichotomy(Vec3(1, 0, 0), ConeDescriptor::half_space(Vec3::UnitZ()));
  CHECK(tangent.dcase == DichotomyCase::CaseI);
  CHECK(tangent.age.has_value());

  const auto normal = dichotomy(Vec3(0, 0, 1), ConeDescriptor::half_space(Vec3::UnitZ()));
  CHECK(normal.dcase == DichotomyCase::CaseII);
  REQUIRE(normal.witness_chain);
  CHECK(normal.witness_chain->tangent.kind == ConeKind::FullSpace);

  const auto oct = dichotomy(Vec3(0, 0, 1), octant());
  CHECK(oct.dcase == DichotomyCase::CaseII);
  REQUIRE(oct.witness_chain);
  REQUIRE(oct.witness_report);
  CHECK(oct.witness_chain->tangent.kind == ConeKind::Wedge);
  CHECK(oct.witness_chain->tangent.edge.cross(Vec3::UnitZ()).norm() < 1e-12);
  CHECK(oct.witness_report->dcase == DichotomyCase::CaseI);
  CHECK(oct.witness_report->E == doctest::Approx(sector_right()).epsilon(1e-9));

  CHECK_THROWS_AS(dichotomy(Vec3::Zero(), octant()), ZeroField);
}

TEST_CASE("homogeneity and sign flip") {
  const auto cone = ConeDescriptor::wedge(2.0, Vec3::UnitZ(), Vec3::UnitX());
  const Vec3 b = Vec3(0.3, -0.4, 0.8).normalized();
  const double e1 = local_energy(b, cone).E;
  CHECK(local_energy(2.5 * b, cone).E == doctest::Approx(2.5 * e1).epsilon(1e-6));
  CHECK(local_energy(-b, cone).E == doctest::Approx(e1).epsilon(1e-9));
}

TEST_CASE("lowest local energy of fixtures") {
  const auto square = io::load_domain(fixture("square.dom"));
  const auto sq = lowest_local_energy(FieldSpec::constant_field({0, 0, 1}), square);
  CHECK(sq.value == doctest::Approx(sector_right()).epsilon(1e-9));
  CHECK(square.vertices[square.polygon[0]].p.isApprox(sq.point) + square.vertices[square.polygon[1]].p.isApprox(sq.point) +
            square.vertices[square.polygon[2]].p.isApprox(sq.point) + square.vertices[square.polygon[3]].p.isApprox(sq.point) ==
        1);

  const auto zero = lowest_local_energy(FieldSpec::constant_field(Vec3::Zero()), square);
  CHECK(zero.value == 0.0);
  CHECK(zero.field_vanishes);

  const auto cube = io::load_domain(fixture("cube.dom"));
  const auto c = lowest_local_energy(FieldSpec::constant_field({0, 0, 1}), cube);
  CHECK(c.value <= sector_right() + 1e-9);
  CHECK(c.value == doctest::Approx(sector_right()).epsilon(1e-6));
}

TEST_CASE("variable field on the square") {
  // B = 1 + x/2 along e3: the minimum is at the corners on x = 0.
  const auto square = io::load_domain(fixture("square.dom"));
  const auto f = io::parse_field("polynomial z: 1 0.5");
  const auto lo = lowest_local_energy(f, square);
  CHECK(lo.value == doctest::Approx(sector_right()).epsilon(1e-6));
  CHECK(lo.point.x() == doctest::Approx(0.0));
}

TEST_CASE("3D cone estimates") {
  Options opt;
  opt.cone3d = true;
  const double est = cone3d_energy_upper(Vec3(0, 0, 1), octant(), opt);
  CHECK(est >= sector_right() - 1e-4);

  const auto resolved = local_energy(Vec3(0, 0, 1), octant(), opt);
  CHECK(resolved.E == doctest::Approx(sector_right()).epsilon(1e-9));

  const double aperture = 0.3;
  const auto cone = ConeDescriptor::circular_cone(aperture, Vec3::UnitZ());
  const double star = energy_star(Vec3(0, 0, 1), cone);
  CHECK(star == doctest::Approx(models::sigma(aperture).value).epsilon(1e-3));
  CHECK(cone3d_energy_upper(Vec3(0, 0, 1), cone, opt) < star);

  CHECK_THROWS_AS(cone3d_energy_upper(Vec3(1, 0, 0), cone, opt), UnsupportedGeometry);
}
