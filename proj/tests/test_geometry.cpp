#include <cmath>

#include <doctest.h>

#include "magcorner/errors.hpp"
#include "magcorner/geometry.hpp"
#include "magcorner/io.hpp"

using namespace magcorner;
using namespace magcorner::geometry;

namespace {

std::string fixture(const char* name) { return std::string(MAGCORNER_FIXTURES) + "/" + name; }

int count(const std::vector<Stratum>& s, Carrier c) {
  int n = 0;
  for (const auto& x : s) n += x.carrier == c;
  return n;
}

const Stratum& first(const std::vector<Stratum>& s, Carrier c) {
  for (const auto& x : s)
    if (x.carrier == c) return x;
  throw std::runtime_error("no stratum");
}

}  // namespace

TEST_CASE("stratification counts") {
  const auto sq = stratify(io::load_domain(fixture("square.dom")));
  CHECK(sq.size() == 9);
  CHECK(count(sq, Carrier::Edge) == 4);
  CHECK(count(sq, Carrier::Vertex) == 4);
  for (const auto& s : sq)
    if (s.carrier == Carrier::Vertex) CHECK(s.d0 == 2);

  const auto cube = stratify(io::load_domain(fixture("cube.dom")));
  CHECK(count(cube, Carrier::Interior) == 1);
  CHECK(count(cube, Carrier::Face) == 6);
  CHECK(count(cube, Carrier::Edge) == 12);
  CHECK(count(cube, Carrier::Vertex) == 8);

  const auto lens = stratify(io::load_domain(fixture("lens.dom")));
  CHECK(lens.size() == 4);
  CHECK(count(lens, Carrier::Face) == 2);
  CHECK(count(lens, Carrier::Edge) == 1);
  CHECK(count(lens, Carrier::Vertex) == 0);
}

TEST_CASE("tangent cones of the cube and the square") {
  const auto cube = io::load_domain(fixture("cube.dom"));
  const auto strata = stratify(cube);
  const auto& edge = first(strata, Carrier::Edge);
  const auto pts = sample_points(cube, edge, 5);
  const auto c0 = tangent_cone_at(cube, edge, pts.front());
  CHECK(c0.kind == ConeKind::Wedge);
  CHECK(c0.opening == doctest::Approx(M_PI / 2).epsilon(1e-12));
  CHECK(c0.same_shape(tangent_cone_at(cube, edge, pts.back())));

  const auto& face = first(strata, Carrier::Face);
  const auto fp = sample_points(cube, face, 4);
  const auto h0 = tangent_cone_at(cube, face, fp.front());
  CHECK(h0.kind == ConeKind::HalfSpace);
  CHECK(h0.same_shape(tangent_cone_at(cube, face, fp.back())));

  const auto& vertex = first(strata, Carrier::Vertex);
  const auto vc = tangent_cone_at(cube, vertex, representative_point(cube, vertex));
  CHECK(vc.kind == ConeKind::Cone3D);
  REQUIRE(vc.rays.size() == 3);
  for (double a : vc.edge_openings) CHECK(a == doctest::Approx(M_PI / 2).epsilon(1e-12));

  const auto sq = io::load_domain(fixture("square.dom"));
  const auto sqs = stratify(sq);
  const auto& corner = first(sqs, Carrier::Vertex);
  const auto cc = tangent_cone_at(sq, corner, representative_point(sq, corner));
  CHECK(cc.kind == ConeKind::Wedge);
  CHECK(cc.opening == doctest::Approx(M_PI / 2));
  CHECK(std::abs(cc.edge.z()) == doctest::Approx(1.0));
  CHECK(polygon_angle(sq, 0) == doctest::Approx(M_PI / 2));
  CHECK(polygon_angle(io::load_domain(fixture("lshape.dom")), 3) == doctest::Approx(1.5 * M_PI));
}

TEST_CASE("chain classes") {
  CHECK(enumerate_chain_classes(ConeDescriptor::full_space()).classes.size() == 1);
  CHECK(enumerate_chain_classes(ConeDescriptor::half_space(Vec3::UnitZ())).classes.size() == 2);
  CHECK(enumerate_chain_classes(ConeDescriptor::wedge(M_PI / 2, Vec3::UnitZ(), Vec3(1, 1, 0))).classes.size() == 4);
  const auto octant = ConeDescriptor::polyhedral_cone({Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()});
  CHECK(enumerate_chain_classes(octant).classes.size() == 8);
  const auto pyramid = ConeDescriptor::polyhedral_cone({Vec3(1, 0, 1), Vec3(0, 1, 1), Vec3(-1, 0, 1), Vec3(0, -1, 1)});
  CHECK(enumerate_chain_classes(pyramid).classes.size() == 10);

  const auto circ = enumerate_chain_classes(ConeDescriptor::circular_cone(0.4, Vec3::UnitZ()));
  CHECK(circ.families.size() == 1);
  CHECK(circ.sampled(64).size() == circ.classes.size() + 64);
}

TEST_CASE("chain order") {
  const auto root = ConeDescriptor::wedge(M_PI / 2, Vec3::UnitZ(), Vec3(1, 1, 0));
  const auto chains = enumerate_chains(root);
  const SingularChain* x0 = nullptr;
  std::vector<const SingularChain*> ones;
  for (const auto& c : chains) {
    if (c.entries.empty()) x0 = &c;
    if (c.entries.size() == 1) ones.push_back(&c);
  }
  REQUIRE(x0);
  REQUIRE(ones.size() >= 2);
  CHECK(chain_leq(*x0, *ones[0]));
  CHECK_FALSE(chain_leq(*ones[0], *ones[1]));
  for (const auto& c : chains)
    if (c.entries.size() == 2 && c.entries[0] == ones[0]->entries[0]) {
      CHECK(chain_leq(*ones[0], c));
      CHECK_FALSE(chain_leq(c, *ones[0]));
    }
}

TEST_CASE("chain distance upper bound") {
  SingularChain a;
  a.tangent = ConeDescriptor::half_space(Vec3::UnitZ());
  CHECK(chain_distance_upper(a, a) == doctest::Approx(0.0));

  SingularChain full;
  full.tangent = ConeDescriptor::full_space();
  CHECK(std::isinf(chain_distance_upper(a, full)));

  for (double phi : {0.1, 0.7, 1.9}) {
    SingularChain b;
    b.tangent = ConeDescriptor::half_space(Vec3(std::sin(phi), 0, std::cos(phi)));
    CHECK(chain_distance_upper(a, b) == doctest::Approx(2 * std::sin(phi / 2)).epsilon(1e-10));
  }
}

TEST_CASE("field angle to a face") {
  const auto hs = ConeDescriptor::half_space(Vec3::UnitZ());
  CHECK(field_face_angle(Vec3(1, 0, 0), hs) == 0.0);
  CHECK(field_face_angle(Vec3(0, 0, -3), hs) == M_PI / 2);
  CHECK(field_face_angle(Vec3(1, 1, 0) / std::sqrt(2.0), hs) == 0.0);
  CHECK(field_face_angle(Vec3(1, 0, 1), hs) == doctest::Approx(M_PI / 4));
}

TEST_CASE("invalid constructions") {
  CHECK_THROWS_AS(ConeDescriptor::wedge(M_PI, Vec3::UnitZ(), Vec3::UnitX()), InvalidDomain);
  CHECK_THROWS_AS(ConeDescriptor::circular_cone(0.0, Vec3::UnitZ()), InvalidDomain);
}
