#include "magcorner/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "magcorner/errors.hpp"
#include "magcorner/sparse_eigen.hpp"

namespace magcorner::oracle {

namespace {

using V2 = Eigen::Vector2d;

std::array<double, 10> monomials(const V2& p) {
  const double x = p.x(), y = p.y();
  return {1.0, x, y, x * x, x * y, y * y, x * x * x, x * x * y, x * y * y, y * y * y};
}

double cross2(const V2& a, const V2& b) { return a.x() * b.y() - a.y() * b.x(); }

std::vector<V2> polygon_points(const geometry::CornerDomain& poly) {
  if (poly.dimension != 2) throw MeshFailure("the oracle needs a planar polygon");
  std::vector<V2> pts;
  for (int v : poly.polygon) pts.emplace_back(poly.vertices[v].p.x(), poly.vertices[v].p.y());
  return pts;
}

V2 vertex_centroid(const std::vector<V2>& pts) {
  V2 c = V2::Zero();
  for (const auto& p : pts) c += p;
  return c / static_cast<double>(pts.size());
}

}  // namespace

// ---------------------------------------------------------------- gauges

Eigen::Vector2d Gauge::operator()(const Eigen::Vector2d& p) const {
  const auto m = monomials(p);
  V2 out = V2::Zero();
  for (std::size_t k = 0; k < m.size(); ++k) {
    out.x() += coeffs[0][k] * m[k];
    out.y() += coeffs[1][k] * m[k];
  }
  return out;
}

double Gauge::line_integral(const Eigen::Vector2d& p, const Eigen::Vector2d& q) const {
  const V2 d = q - p;
  return ((*this)(p).dot(d) + 4.0 * (*this)(0.5 * (p + q)).dot(d) + (*this)(q).dot(d)) / 6.0;
}

double Gauge::curl(const Eigen::Vector2d& p) const {
  const double x = p.x(), y = p.y();
  const auto& a = coeffs[0];
  const auto& b = coeffs[1];
  const double dA2dx = b[1] + 2 * b[3] * x + b[4] * y + 3 * b[6] * x * x + 2 * b[7] * x * y + b[8] * y * y;
  const double dA1dy = a[2] + a[4] * x + 2 * a[5] * y + a[7] * x * x + 2 * a[8] * x * y + 3 * a[9] * y * y;
  return dA2dx - dA1dy;
}

Gauge Gauge::symmetric(double b, const Eigen::Vector2d& c) {
  Gauge g;
  g.coeffs[0][0] = 0.5 * b * c.y();
  g.coeffs[0][2] = -0.5 * b;
  g.coeffs[1][0] = -0.5 * b * c.x();
  g.coeffs[1][1] = 0.5 * b;
  return g;
}

Gauge Gauge::from_field(const energy::FieldSpec& field) {
  // e3 component over 1, x, y, z, xx, xy, xz, yy, yz, zz, restricted to z = 0.
  const auto& c = field.coeffs[2];
  Gauge g;
  auto& a2 = g.coeffs[1];
  a2[1] = c[0];
  a2[3] = 0.5 * c[1];
  a2[4] = c[2];
  a2[6] = c[4] / 3.0;
  a2[7] = 0.5 * c[5];
  a2[8] = c[7];
  return g;
}

Gauge Gauge::shifted(const std::array<double, 6>& phi) const {
  Gauge g = *this;
  g.coeffs[0][0] += phi[1];
  g.coeffs[0][1] += 2 * phi[3];
  g.coeffs[0][2] += phi[4];
  g.coeffs[1][0] += phi[2];
  g.coeffs[1][1] += phi[4];
  g.coeffs[1][2] += 2 * phi[5];
  return g;
}

Gauge Gauge::scaled(double s) const {
  Gauge g = *this;
  for (auto& comp : g.coeffs)
    for (auto& c : comp) c *= s;
  return g;
}

// ---------------------------------------------------------------- mesh

Mesh mesh_polygon(const geometry::CornerDomain& polygon, double step) {
  if (!(step > 0.0)) throw MeshFailure("mesh step must be positive");
  const auto pts = polygon_points(polygon);
  const V2 c = vertex_centroid(pts);
  const std::size_t m = pts.size();
  double longest = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const V2 &a = pts[k], &b = pts[(k + 1) % m];
    if (cross2(a - c, b - c) <= 1e-14) throw MeshFailure("polygon is not star-shaped about its vertex centroid");
    longest = std::max({longest, (a - c).norm(), (b - a).norm()});
  }
  const int n = std::max(1, static_cast<int>(std::ceil(longest / step - 1e-9)));

  Mesh mesh;
  std::map<std::pair<long long, long long>, int> index;
  auto node = [&](const V2& p) {
    const std::pair<long long, long long> key{std::llround(p.x() * 1e9), std::llround(p.y() * 1e9)};
    const auto it = index.find(key);
    if (it != index.end()) return it->second;
    const int id = static_cast<int>(mesh.nodes.size());
    mesh.nodes.push_back(p);
    index.emplace(key, id);
    return id;
  };
  for (std::size_t k = 0; k < m; ++k) {
    const V2 u = (pts[k] - c) / n, v = (pts[(k + 1) % m] - c) / n;
    std::vector<std::vector<int>> id(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i)
      for (int j = 0; i + j <= n; ++j) id[static_cast<std::size_t>(i)].push_back(node(c + i * u + j * v));
    for (int i = 0; i < n; ++i)
      for (int j = 0; i + j < n; ++j) {
        const auto I = static_cast<std::size_t>(i), J = static_cast<std::size_t>(j);
        mesh.triangles.push_back({id[I][J], id[I + 1][J], id[I][J + 1]});
        if (i + j + 1 < n) mesh.triangles.push_back({id[I + 1][J], id[I + 1][J + 1], id[I][J + 1]});
      }
  }
  return mesh;
}

MagneticSystem assemble(const Mesh& mesh, const Gauge& gauge, double h) {
  const auto n = static_cast<Eigen::Index>(mesh.nodes.size());
  MagneticSystem sys;
  sys.mass = Eigen::VectorXd::Zero(n);
  std::map<std::pair<int, int>, double> weight;
  for (const auto& t : mesh.triangles) {
    const V2 &a = mesh.nodes[t[0]], &b = mesh.nodes[t[1]], &c = mesh.nodes[t[2]];
    const double area2 = cross2(b - a, c - a);
    if (area2 <= 0.0) throw MeshFailure("degenerate or inverted triangle");
    for (int k = 0; k < 3; ++k) {
      sys.mass[t[k]] += area2 / 6.0;
      const V2 &o = mesh.nodes[t[k]], &p = mesh.nodes[t[(k + 1) % 3]], &q = mesh.nodes[t[(k + 2) % 3]];
      const double cot = (p - o).dot(q - o) / area2;
      const int i = std::min(t[(k + 1) % 3], t[(k + 2) % 3]), j = std::max(t[(k + 1) % 3], t[(k + 2) % 3]);
      weight[{i, j}] += 0.5 * cot;
    }
  }
  std::vector<Eigen::Triplet<std::complex<double>>> trip;
  trip.reserve(weight.size() * 2 + static_cast<std::size_t>(n));
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  const double h2 = h * h;
  for (const auto& [e, w] : weight) {
    const double theta = gauge.line_integral(mesh.nodes[e.first], mesh.nodes[e.second]) / h;
    const std::complex<double> f = std::polar(1.0, theta);
    trip.emplace_back(e.first, e.second, -h2 * w * f);
    trip.emplace_back(e.second, e.first, -h2 * w * std::conj(f));
    diag[e.first] += h2 * w;
    diag[e.second] += h2 * w;
  }
  for (Eigen::Index p = 0; p < n; ++p) trip.emplace_back(p, p, diag[p]);
  sys.A.resize(n, n);
  sys.A.setFromTriplets(trip.begin(), trip.end());
  sys.A.makeCompressed();
  return sys;
}

// ---------------------------------------------------------------- solves

OracleResult fd_eigensolve_2d(const geometry::CornerDomain& polygon, const Gauge& gauge, double h, double step) {
  if (!(h > 0.0)) throw InvalidDomain("h must be positive");
  OracleResult out;
  out.gauge = gauge;
  out.h = h;
  out.step = step > 0.0 ? step : std::min(h / 4.0, 1.0 / 64.0);
  for (double s : {2.0 * out.step, out.step, 0.5 * out.step}) {
    const Mesh mesh = mesh_polygon(polygon, s);
    const auto sys = assemble(mesh, gauge, h);
    linalg::EigenOptions opts;
    opts.shift = -0.05 * h;
    const auto res = linalg::lowest_eigenpairs(sys.A, sys.mass, opts);
    out.history.push_back({s, static_cast<long>(mesh.nodes.size()), std::max(0.0, res.values[0])});
  }
  const double a = out.history[0].lambda, b = out.history[1].lambda, c = out.history[2].lambda;
  const double r0 = (4.0 * b - a) / 3.0, r1 = (4.0 * c - b) / 3.0;
  out.lambda = std::max(0.0, r1);
  out.error_estimate = std::abs(r1 - r0);
  out.lambda_over_h = out.lambda / h;
  return out;
}

StudyTable convergence_study(const geometry::CornerDomain& polygon, const energy::FieldSpec& field,
                             const std::vector<double>& h_list, double E) {
  if (h_list.size() < 3) throw InvalidDomain("a convergence study needs at least three values of h");
  for (std::size_t k = 1; k < h_list.size(); ++k)
    if (!(h_list[k] < h_list[k - 1])) throw InvalidDomain("h values must be strictly descending");
  Gauge gauge;
  if (field.is_constant()) {
    if (field.constant.head<2>().norm() > 0.0) throw InvalidDomain("planar fields must be along e3");
    gauge = Gauge::symmetric(field.constant.z(), vertex_centroid(polygon_points(polygon)));
  } else {
    gauge = Gauge::from_field(field);
  }
  const std::array<double, 6> phi = {0.0, 0.1, -0.2, 0.3, -0.25, 0.15};

  StudyTable t;
  t.E = E;
  for (double h : h_list) {
    const auto r = fd_eigensolve_2d(polygon, gauge, h);
    const auto g = fd_eigensolve_2d(polygon, gauge.shifted(phi), h);
    StudyRow row;
    row.h = h;
    row.lambda = r.lambda;
    row.lambda_over_h = r.lambda_over_h;
    row.deviation = r.lambda_over_h - E;
    row.grid_error = r.error_estimate;
    row.step = r.step;
    row.gauge_difference = std::abs(g.lambda - r.lambda);
    row.gauge_ok = row.gauge_difference <= 5.0 * std::max(r.error_estimate, 1e-12 * std::max(1.0, r.lambda));
    row.noisy = std::abs(row.deviation) <= r.error_estimate / h;
    t.rows.push_back(row);
  }

  t.deviations_decrease = true;
  for (std::size_t k = 1; k < t.rows.size(); ++k)
    t.deviations_decrease = t.deviations_decrease && std::abs(t.rows[k].deviation) < std::abs(t.rows[k - 1].deviation);

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& row : t.rows) {
    if (row.deviation == 0.0) continue;
    const double x = std::log(row.h), y = std::log(std::abs(row.deviation));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n >= 2) t.fitted_rate = (n * sxy - sx * sy) / (n * sxx - sx * sx);

  for (std::size_t k = 0; k < 2; ++k)
    t.c_upper = std::max(t.c_upper, std::abs(t.rows[k].deviation) / std::pow(t.rows[k].h, 0.25));
  t.sandwich_ok = true;
  for (std::size_t k = 2; k < t.rows.size(); ++k)
    t.sandwich_ok = t.sandwich_ok && std::abs(t.rows[k].deviation) <= t.c_upper * std::pow(t.rows[k].h, 0.25);
  return t;
}

}  // namespace magcorner::oracle
