#include <cmath>

#include <doctest.h>
#include <Eigen/Dense>

#include "magcorner/errors.hpp"
#include "magcorner/io.hpp"
#include "magcorner/oracle.hpp"

using namespace magcorner;
using namespace magcorner::oracle;

namespace {

std::string fixture(const char* name) { return std::string(MAGCORNER_FIXTURES) + "/" + name; }

/// Independent oracle: Peierls-phase finite differences on a uniform
/// cell-centred grid of the unit square with the symmetric gauge centred at
/// (1/2, 1/2), solved densely. Neumann conditions drop the boundary links.
double cartesian_square(double h, int n) {
  const double s = 1.0 / n;
  const int N = n * n;
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(N, N);
  auto id = [n](int i, int j) { return j * n + i; };
  auto link = [&](int p, int q, double phase) {
    const std::complex<double> w = -std::polar(1.0, phase / h) * (h * h / (s * s));
    A(p, q) += w;
    A(q, p) += std::conj(w);
    A(p, p) += h * h / (s * s);
    A(q, q) += h * h / (s * s);
  };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double x = (i + 0.5) * s - 0.5, y = (j + 0.5) * s - 0.5;
      // Exact line integrals of A = (-y/2, x/2) along the grid links.
      if (i + 1 < n) link(id(i, j), id(i + 1, j), -0.5 * y * s);
      if (j + 1 < n) link(id(i, j), id(i, j + 1), 0.5 * x * s);
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

}  // namespace

TEST_CASE("gauge algebra") {
  const auto g = Gauge::symmetric(2.0, {0.5, 0.5});
  CHECK(g.curl({0.3, 0.9}) == doctest::Approx(2.0));
  const auto shifted = g.shifted({0.1, 0.2, -0.3, 0.4, 0.5, -0.6});
  CHECK(shifted.curl({0.7, -0.2}) == doctest::Approx(2.0));
  // Line integral of a gradient is the potential difference.
  const Gauge zero{};
  const auto grad = zero.shifted({0.0, 1.0, 0.0, 0.0, 1.0, 0.0});  // phi = x + xy
  const Eigen::Vector2d p(0.1, 0.2), q(0.8, -0.4);
  auto phi = [](const Eigen::Vector2d& x) { return x.x() + x.x() * x.y(); };
  CHECK(grad.line_integral(p, q) == doctest::Approx(phi(q) - phi(p)).epsilon(1e-12));
  const auto fromf = Gauge::from_field(io::parse_field("polynomial z: 1 0 2 ; x: 0 0 0 -2"));
  CHECK(fromf.curl({0.4, 0.3}) == doctest::Approx(1.6));
}

TEST_CASE("meshes") {
  const auto square = io::load_domain(fixture("square.dom"));
  const auto m = mesh_polygon(square, 0.1);
  double area = 0.0;
  for (const auto& t : m.triangles) {
    const Eigen::Vector2d a = m.nodes[t[1]] - m.nodes[t[0]], b = m.nodes[t[2]] - m.nodes[t[0]];
    const double tw = 0.5 * (a.x() * b.y() - a.y() * b.x());
    CHECK(tw > 0.0);
    area += tw;
  }
  CHECK(area == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero field: the Neumann kernel") {
  const auto lshape = io::load_domain(fixture("lshape.dom"));
  const auto r = fd_eigensolve_2d(lshape, Gauge{}, 0.2, 1.0 / 16);
  CHECK(std::abs(r.lambda) < 1e-10);

  // A pure gauge A = grad(phi) has zero field as well.
  const auto pure = Gauge{}.shifted({0, 0.3, -0.2, 0.5, 0.25, -0.4});
  CHECK(std::abs(fd_eigensolve_2d(lshape, pure, 0.2, 1.0 / 16).lambda) < 1e-8);

  const auto st = convergence_study(lshape, energy::FieldSpec::constant_field(geometry::Vec3::Zero()), {0.4, 0.2, 0.1}, 0.0);
  for (const auto& row : st.rows) CHECK(std::abs(row.lambda) < 1e-8);
}

TEST_CASE("gauge shift leaves the eigenvalue unchanged") {
  const auto square = io::load_domain(fixture("square.dom"));
  const auto g = Gauge::symmetric(1.0, {0.5, 0.5});
  const auto a = fd_eigensolve_2d(square, g, 0.2);
  const auto b = fd_eigensolve_2d(square, g.shifted({0, 0.1, -0.2, 0.3, -0.25, 0.15}), 0.2);
  CHECK(std::abs(a.lambda - b.lambda) < 5 * std::max(a.error_estimate, 1e-12));
}

TEST_CASE("square with unit field agrees with an independent Cartesian discretization") {
  const auto square = io::load_domain(fixture("square.dom"));
  const double h = 0.25;
  const auto r = fd_eigensolve_2d(square, Gauge::symmetric(1.0, {0.5, 0.5}), h);
  // Second-order Cartesian values on n and 2n cells, extrapolated.
  const double c1 = cartesian_square(h, 24), c2 = cartesian_square(h, 48);
  const double cart = (4 * c2 - c1) / 3;
  CHECK(std::abs(r.lambda - cart) < 1e-4 * h + r.error_estimate);
  CHECK(r.history.size() == 3);
}

TEST_CASE("star-shape requirement") {
  const auto d = io::parse_domain(
      "# magcorner domain v1\ndimension 2\n"
      "vertex a 0 0\nvertex b 3 0\nvertex c 3 3\nvertex d 2.9 3\nvertex e 2.9 0.1\nvertex f 0.1 0.1\nvertex g 0.1 3\nvertex k 0 3\n"
      "polygon a b c d e f g k\n");
  CHECK_THROWS_AS(mesh_polygon(d, 0.2), MeshFailure);
}

TEST_CASE("regular 16-gon approaches the lowest local energy") {
  const auto p16 = io::load_domain(fixture("polygon16.dom"));
  const auto field = energy::FieldSpec::constant_field({0, 0, 1});
  const auto lo = energy::lowest_local_energy(field, p16);
  CHECK(lo.value < 0.5901);
  CHECK(lo.value > 0.58);
  // At these h the mode sees the polygon as a disc, so lambda/h sits below E
  // and the gap closes roughly like h^{1/2}.
  const auto st = convergence_study(p16, field, {0.2, 0.1, 0.05}, lo.value);
  CHECK(st.deviations_decrease);
  for (const auto& row : st.rows) CHECK(row.deviation < 0.0);
  CHECK(std::abs(st.rows.back().deviation) < 0.07);
  CHECK(st.fitted_rate > 0.3);
}
