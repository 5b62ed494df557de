#include <doctest.h>

#include "magcorner/asymptotics.hpp"
#include "magcorner/io.hpp"

using namespace magcorner;
using namespace magcorner::asymptotics;

namespace {

std::string fixture(const char* name) { return std::string(MAGCORNER_FIXTURES) + "/" + name; }

/// Lowest-energy record with a given class-relevant shape, without solves.
energy::LowestEnergy lowest_at(double value, geometry::Carrier carrier, energy::DichotomyCase c) {
  energy::LowestEnergy lo;
  lo.value = value;
  energy::StratumRow row;
  row.stratum.carrier = carrier;
  row.report.E = value;
  row.report.dcase = c;
  lo.table.push_back(row);
  lo.stratum = 0;
  return lo;
}

}  // namespace

TEST_CASE("exponents per class") {
  CHECK(exponents(DomainClass::Polyhedral, Smoothness::W2).lower == Exponent{5, 4});
  CHECK(exponents(DomainClass::Polyhedral, Smoothness::W2).upper == Exponent{5, 4});
  CHECK(exponents(DomainClass::GeneralCorner, Smoothness::W3).lower == Exponent{11, 10});
  CHECK(exponents(DomainClass::GeneralCorner, Smoothness::W3).upper == Exponent{9, 8});
  CHECK(exponents(DomainClass::VanishingField, Smoothness::W2).upper == Exponent{4, 3});
  CHECK(large_field_exponents(DomainClass::Polyhedral, Smoothness::W2).lower == Exponent{3, 4});
  CHECK(large_field_exponents(DomainClass::GeneralCorner, Smoothness::W2).lower == Exponent{9, 10});
  CHECK(large_field_exponents(DomainClass::Polyhedral, Smoothness::W3).upper == Exponent{2, 3});
  CHECK(Exponent{3, 2, true}.text() == "3/2 |log|");
  CHECK_FALSE(Exponent{3, 2, true} == Exponent{3, 2});
}

TEST_CASE("classification of fixtures") {
  const auto square = io::load_domain(fixture("square.dom"));
  const auto cube = io::load_domain(fixture("cube.dom"));
  const auto cone = io::load_domain(fixture("cone.dom"));
  const auto lens = io::load_domain(fixture("lens.dom"));
  const auto unit = energy::FieldSpec::constant_field({0, 0, 1});
  const auto varying = io::parse_field("polynomial z: 1 0.5");
  const auto face_min = lowest_at(0.6, geometry::Carrier::Face, energy::DichotomyCase::CaseI);

  CHECK(classify(square, unit, face_min) == DomainClass::StraightConstant);
  CHECK(classify(cube, unit, face_min) == DomainClass::StraightConstant);
  CHECK(classify(square, varying, face_min) == DomainClass::Polyhedral);
  CHECK(classify(lens, unit, face_min) == DomainClass::Polyhedral);
  CHECK(classify(cone, unit, face_min) == DomainClass::GeneralCorner);
  CHECK(classify(square, varying, lowest_at(0.5, geometry::Carrier::Vertex, energy::DichotomyCase::CaseI)) ==
        DomainClass::CornerConcentration);
  CHECK(classify(square, varying, lowest_at(0.5, geometry::Carrier::Vertex, energy::DichotomyCase::CaseII)) ==
        DomainClass::Polyhedral);
  auto vanishing = face_min;
  vanishing.value = 0.0;
  vanishing.field_vanishes = true;
  CHECK(classify(cube, unit, vanishing) == DomainClass::VanishingField);
}

TEST_CASE("bounds carry the class exponents and empirical constants") {
  const auto cone = io::load_domain(fixture("cone.dom"));
  const auto f = io::parse_field("polynomial z: 1 0.1");
  const auto lo = lowest_at(0.6, geometry::Carrier::Face, energy::DichotomyCase::CaseI);
  const auto b = lambda_bounds(cone, f, 0.01, Smoothness::W3, lo);
  CHECK(b.central == doctest::Approx(0.006));
  CHECK(b.lower == Exponent{11, 10});
  CHECK(b.upper == Exponent{9, 8});
  CHECK_FALSE(b.interval());

  const auto large = large_field_bounds(cone, f, 100.0, Smoothness::W2, lo);
  CHECK(large.central == doctest::Approx(60.0));
  CHECK(large.lower == Exponent{9, 10});
  CHECK(large.upper == Exponent{9, 10});

  const auto square = io::load_domain(fixture("square.dom"));
  oracle::StudyTable st;
  st.E = 0.5;
  st.rows.push_back({0.1, 0.048, 0.48, -0.02});
  st.rows.push_back({0.05, 0.0255, 0.51, 0.01});
  const auto sq = lambda_bounds(square, io::parse_field("polynomial z: 1 0.5"), 0.05, Smoothness::W2,
                                lowest_at(0.5, geometry::Carrier::Face, energy::DichotomyCase::CaseI), &st);
  REQUIRE(sq.interval());
  const auto [lo_b, hi_b] = *sq.interval();
  CHECK(lo_b <= 0.0255);
  CHECK(hi_b >= 0.0255);
}

TEST_CASE("corner concentration on the square") {
  const auto square = io::load_domain(fixture("square.dom"));
  const auto cc = corner_concentration(square, energy::FieldSpec::constant_field({0, 0, 1}));
  CHECK(cc.floor == doctest::Approx(0.590106).epsilon(1e-5));
  REQUIRE(cc.levels.size() >= 4);
  for (std::size_t k = 0; k < 4; ++k) CHECK(cc.levels[k].energy == doctest::Approx(cc.levels[0].energy).epsilon(1e-12));
  for (std::size_t k = 1; k < cc.levels.size(); ++k) CHECK(cc.levels[k - 1].energy <= cc.levels[k].energy);
  CHECK(cc.levels[0].energy < cc.floor - 1e-3);
}

TEST_CASE("corner concentration: two openings, and none below the floor") {
  // Triangle with angles pi/2, pi/4, pi/4.
  const auto tri = io::parse_domain("# magcorner domain v1\ndimension 2\nvertex a 0 0\nvertex b 1 0\nvertex c 0 1\npolygon a b c\n");
  const auto cc = corner_concentration(tri, energy::FieldSpec::constant_field({0, 0, 1}), {}, {}, 1);
  REQUIRE(cc.levels.size() == 3);
  CHECK(cc.levels[0].energy == doctest::Approx(cc.levels[1].energy).epsilon(1e-12));
  CHECK(cc.levels[1].energy < cc.levels[2].energy);
  CHECK(cc.levels[2].label == "corner a");

  // |B| = 1 + 2|x - c|^2 doubles the field at the corners of the square,
  // lifting them above the side midpoints.
  const auto square = io::load_domain(fixture("square.dom"));
  const auto bowl = io::parse_field("polynomial z: 2 -2 -2 0 2 0 0 2");
  const auto none = corner_concentration(square, bowl, {}, {}, 1);
  CHECK(none.floor == doctest::Approx(1.5 * 0.590106).epsilon(1e-4));
  CHECK(none.levels.empty());
}
