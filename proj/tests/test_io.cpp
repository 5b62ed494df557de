#include <cmath>

#include <doctest.h>

#include "magcorner/errors.hpp"
#include "magcorner/io.hpp"

using namespace magcorner;

namespace {
std::string fixture(const char* name) { return std::string(MAGCORNER_FIXTURES) + "/" + name; }
}  // namespace

TEST_CASE("fixtures load") {
  const auto sq = io::load_domain(fixture("square.dom"));
  CHECK(sq.dimension == 2);
  CHECK(sq.polygon.size() == 4);
  CHECK(sq.vertices[2].p.isApprox(geometry::Vec3(1, 1, 0)));

  const auto cube = io::load_domain(fixture("cube.dom"));
  CHECK(cube.dimension == 3);
  CHECK(cube.faces.size() == 6);
  CHECK(cube.edges.size() == 12);
  CHECK(cube.is_straight());
  for (const auto& e : cube.edges) CHECK(e.opening == doctest::Approx(M_PI / 2).epsilon(1e-12));

  const auto lens = io::load_domain(fixture("lens.dom"));
  REQUIRE(lens.edges.size() == 1);
  CHECK(lens.edges[0].closed());
  CHECK(lens.edges[0].samples.size() == 64);
  CHECK(lens.edges[0].opening == doctest::Approx(0.3 * M_PI).epsilon(1e-12));
  CHECK(geometry::edge_opening(lens, lens.edges[0]) == doctest::Approx(0.3 * M_PI).epsilon(1e-12));

  const auto cone = io::load_domain(fixture("cone.dom"));
  REQUIRE(cone.conical.size() == 1);
  CHECK(cone.conical[0].aperture == doctest::Approx(M_PI / 6));
}

TEST_CASE("flipped cube normal names the normal-consistency invariant") {
  try {
    io::load_domain(fixture("cube_flipped.dom"));
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.invariant() == "face-normal-consistency");
    CHECK(e.exit_code() == 2);
  }
}

TEST_CASE("parse errors carry the line") {
  CHECK_THROWS_AS(io::parse_domain("dimension 2\n"), ParseError);
  try {
    io::parse_domain("# magcorner domain v1\ndimension 2\nvertex a 0 0\nvertex b 1 zero\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
  try {
    io::parse_domain("# magcorner domain v1\ndimension 2\nvertex a 0 0\npolygon a q\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
  // Clockwise loop.
  CHECK_THROWS_AS(io::parse_domain("# magcorner domain v1\ndimension 2\nvertex a 0 0\nvertex b 0 1\nvertex c 1 0\npolygon a b c\n"),
                  ValidationError);
  // A declared opening that disagrees with the faces.
  std::string lens = io::text_or_file(fixture("lens.dom"));
  lens.replace(lens.rfind("opening 0.3pi"), 13, "opening 0.4pi");
  CHECK_THROWS_AS(io::parse_domain(lens), ValidationError);
}

TEST_CASE("pi suffix") {
  const auto d = io::parse_domain(
      "# magcorner domain v1\ndimension 2\nvertex a 0 0\nvertex b 1 0\nvertex c 0.5 0.5\npolygon a b c\n");
  CHECK(d.polygon.size() == 3);
  CHECK(io::parse_cone("wedge 0.5pi 0 0 1 1 0 0").opening == doctest::Approx(M_PI / 2));
  CHECK(io::parse_cone("wedge 1.5*pi 0 0 1 1 0 0").opening == doctest::Approx(1.5 * M_PI));
}

TEST_CASE("field specs") {
  const auto f = io::parse_field("constant 0 0 1");
  CHECK(f.is_constant());
  CHECK(f(geometry::Vec3(3, 4, 5)).isApprox(geometry::Vec3(0, 0, 1)));
  CHECK(io::parse_field("constant 2")(geometry::Vec3::Zero()).isApprox(geometry::Vec3(0, 0, 2)));
  CHECK(io::parse_field("constant 1 2")(geometry::Vec3::Zero()).isApprox(geometry::Vec3(1, 2, 0)));
  CHECK_THROWS_AS(io::parse_field("constant 1 2 3 4"), ParseError);
  CHECK_THROWS_AS(io::parse_field("uniform 1"), ParseError);

  // B = (y, 0, 1 + x): divergence free.
  const auto p = io::parse_field("polynomial x: 0 0 1 ; z: 1 1");
  CHECK_FALSE(p.is_constant());
  CHECK(p(geometry::Vec3(2, 3, 0)).isApprox(geometry::Vec3(3, 0, 3)));
  CHECK_THROWS_AS(io::parse_field("polynomial x: 0 1"), ValidationError);
}

TEST_CASE("gauge curl check") {
  const auto sym = io::parse_gauge("polynomial x: 0 0 -0.5 ; y: 0 0.5");
  CHECK_NOTHROW(io::parse_field("constant 0 0 1", &sym));
  CHECK_THROWS_AS(io::parse_field("constant 0 0 2", &sym), CurlMismatch);
  const auto shifted = io::parse_gauge("symmetric 1 0.5 0.5");
  CHECK_NOTHROW(io::parse_field("constant 1", &shifted));

  // A = (0, x^2/2): curl = x.
  const auto lin = io::parse_gauge("polynomial y: 0 0 0 0.5");
  CHECK_NOTHROW(io::parse_field("polynomial z: 0 1 ; y: 0 0 0 -1", &lin));
  CHECK_THROWS_AS(io::parse_field("constant 1", &lin), CurlMismatch);
}

TEST_CASE("cone specs") {
  CHECK(io::parse_cone("fullspace").kind == geometry::ConeKind::FullSpace);
  CHECK(io::parse_cone("halfspace 0 0 2").normal.isApprox(geometry::Vec3::UnitZ()));
  CHECK(io::parse_cone("octant").rays.size() == 3);
  CHECK(io::parse_cone("polycone 1 0 1 ; 0 1 1 ; -1 0 1 ; 0 -1 1").rays.size() == 4);
  CHECK(io::parse_cone("circular 0.3 0 0 1").aperture == 0.3);
  CHECK_THROWS_AS(io::parse_cone("sphere"), ParseError);
  CHECK_THROWS_AS(io::parse_cone("halfspace 0 0"), ParseError);
}
