#include "magcorner/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <Eigen/Geometry>

#include "magcorner/errors.hpp"

namespace magcorner::geometry {

namespace {

constexpr double kTangency = 1e-12;

Vec3 any_orthogonal(const Vec3& u) {
  const Vec3 trial = std::abs(u.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  return (trial - trial.dot(u) * u).normalized();
}

Vec3 orthogonal_part(const Vec3& v, const Vec3& t) { return v - v.dot(t) * t; }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

const char* to_string(ConeKind kind) {
  switch (kind) {
    case ConeKind::FullSpace: return "full-space";
    case ConeKind::HalfSpace: return "half-space";
    case ConeKind::Wedge: return "wedge";
    case ConeKind::Cone3D: return "cone";
  }
  return "?";
}

// ---------------------------------------------------------------- cones

int ConeDescriptor::reduced_dimension() const {
  switch (kind) {
    case ConeKind::FullSpace: return 0;
    case ConeKind::HalfSpace: return 1;
    case ConeKind::Wedge: return 2;
    case ConeKind::Cone3D: return 3;
  }
  return 0;
}

Eigen::Matrix3d ConeDescriptor::wedge_frame() const {
  Eigen::Matrix3d f;
  f.col(0) = edge;
  f.col(1) = bisector;
  f.col(2) = edge.cross(bisector);
  return f;
}

std::pair<Vec3, Vec3> ConeDescriptor::wedge_face_normals() const {
  const Vec3 third = edge.cross(bisector);
  const double s = std::sin(0.5 * opening), c = std::cos(0.5 * opening);
  return {-s * bisector + c * third, -s * bisector - c * third};
}

ConeDescriptor ConeDescriptor::full_space(const Vec3& base) {
  ConeDescriptor c;
  c.kind = ConeKind::FullSpace;
  c.base = base;
  return c;
}

ConeDescriptor ConeDescriptor::half_space(const Vec3& normal, const Vec3& base) {
  if (normal.norm() < kTangency) throw InvalidDomain("half-space normal vanishes");
  ConeDescriptor c;
  c.kind = ConeKind::HalfSpace;
  c.normal = normal.normalized();
  c.base = base;
  return c;
}

ConeDescriptor ConeDescriptor::wedge(double opening, const Vec3& edge, const Vec3& bisector, const Vec3& base) {
  if (!(opening > 0 && opening < 2 * M_PI) || std::abs(opening - M_PI) < kTangency)
    throw InvalidDomain("wedge opening must lie in (0,pi) or (pi,2pi)");
  ConeDescriptor c;
  c.kind = ConeKind::Wedge;
  c.opening = opening;
  c.edge = edge.normalized();
  c.bisector = orthogonal_part(bisector, c.edge).normalized();
  c.base = base;
  return c;
}

double dihedral_opening(const Vec3& n_a, const Vec3& d_a, const Vec3& d_b) {
  const double phi = std::atan2(d_a.cross(d_b).norm(), d_a.dot(d_b));
  return d_b.dot(n_a) < 0 ? phi : 2 * M_PI - phi;
}

ConeDescriptor ConeDescriptor::wedge_from_faces(const Vec3& edge, const Vec3& n_a, const Vec3& d_a, const Vec3& n_b,
                                                const Vec3& d_b, const Vec3& base) {
  (void)n_b;
  Vec3 t = edge.normalized();
  const Vec3 u = orthogonal_part(d_a, t).normalized();
  const Vec3 w = -orthogonal_part(n_a, t).normalized();
  const double alpha = dihedral_opening(n_a, u, orthogonal_part(d_b, t).normalized());
  // Orient the edge so that face a sits at -alpha/2 in the wedge frame.
  if (t.cross(u).dot(w) < 0) t = -t;
  const Vec3 bis = std::cos(0.5 * alpha) * u + std::sin(0.5 * alpha) * w;
  return wedge(alpha, t, bis, base);
}

ConeDescriptor ConeDescriptor::polyhedral_cone(const std::vector<Vec3>& rays, const Vec3& base,
                                               const std::vector<Vec3>& face_normals) {
  const std::size_t n = rays.size();
  if (n < 3) throw UnsupportedGeometry("vertex section needs at least three sides");
  ConeDescriptor c;
  c.kind = ConeKind::Cone3D;
  c.section = SectionKind::Polygon;
  c.base = base;
  for (const auto& r : rays) c.rays.push_back(r.normalized());
  Vec3 mean = Vec3::Zero();
  for (const auto& r : c.rays) mean += r;
  double orient = 0.0;
  for (std::size_t k = 0; k < n; ++k) orient += c.rays[k].cross(c.rays[(k + 1) % n]).dot(mean);
  // Outward normals: r_k x r_{k+1} points inward for counter-clockwise order seen from inside.
  const double sign = orient > 0 ? -1.0 : 1.0;
  if (face_normals.size() == n) {
    for (const auto& f : face_normals) c.face_normals.push_back(f.normalized());
  } else {
    for (std::size_t k = 0; k < n; ++k)
      c.face_normals.push_back(sign * c.rays[k].cross(c.rays[(k + 1) % n]).normalized());
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Vec3& r = c.rays[k];
    const Vec3 d_a = orthogonal_part(c.rays[(k + n - 1) % n], r).normalized();
    const Vec3 d_b = orthogonal_part(c.rays[(k + 1) % n], r).normalized();
    c.edge_openings.push_back(dihedral_opening(c.face_normals[(k + n - 1) % n], d_a, d_b));
  }
  return c;
}

ConeDescriptor ConeDescriptor::circular_cone(double aperture, const Vec3& axis, const Vec3& base) {
  if (!(aperture > 0 && aperture < M_PI)) throw InvalidDomain("cone aperture must lie in (0, pi)");
  ConeDescriptor c;
  c.kind = ConeKind::Cone3D;
  c.section = SectionKind::Circle;
  c.aperture = aperture;
  c.axis = axis.normalized();
  c.base = base;
  return c;
}

bool ConeDescriptor::same_shape(const ConeDescriptor& o, double tol) const {
  if (kind != o.kind || ambient_dimension != o.ambient_dimension) return false;
  switch (kind) {
    case ConeKind::FullSpace: return true;
    case ConeKind::HalfSpace: return (normal - o.normal).norm() <= tol;
    case ConeKind::Wedge: {
      if (std::abs(opening - o.opening) > tol || (bisector - o.bisector).norm() > tol) return false;
      return (edge - o.edge).norm() <= tol || (edge + o.edge).norm() <= tol;
    }
    case ConeKind::Cone3D: {
      if (section != o.section) return false;
      if (section == SectionKind::Circle)
        return std::abs(aperture - o.aperture) <= tol && (axis - o.axis).norm() <= tol;
      if (rays.size() != o.rays.size()) return false;
      // Same rays up to a cyclic shift.
      const std::size_t n = rays.size();
      for (std::size_t s = 0; s < n; ++s) {
        bool ok = true;
        for (std::size_t k = 0; k < n && ok; ++k) ok = (rays[k] - o.rays[(k + s) % n]).norm() <= tol;
        if (ok) return true;
      }
      return false;
    }
  }
  return false;
}

double field_face_angle(const Vec3& B, const ConeDescriptor& half_space) {
  const double b = B.norm();
  if (b == 0.0) throw ZeroField();
  return angle_from_sine(std::abs(B.dot(half_space.normal)) / b);
}

double angle_from_sine(double s) {
  if (s < 1e-12) return 0.0;
  if (s > 1.0 - 1e-15) return M_PI_2;
  return std::asin(s);
}

// ---------------------------------------------------------------- domains

Vec3 Face::normal_at(const Vec3& x) const {
  switch (kind) {
    case FaceKind::Plane: return normal;
    case FaceKind::Sphere: {
      const Vec3 n = (x - center).normalized();
      return inward ? -n : n;
    }
    case FaceKind::Cone: {
      const Vec3 g = (x - center).normalized();
      return (g.dot(axis) * g - axis).normalized();
    }
  }
  return normal;
}

int CornerDomain::vertex_index(const std::string& id) const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i].id == id) return static_cast<int>(i);
  return -1;
}

int CornerDomain::face_index(const std::string& id) const {
  for (std::size_t i = 0; i < faces.size(); ++i)
    if (faces[i].id == id) return static_cast<int>(i);
  return -1;
}

const ConicalVertex* CornerDomain::conical_at(int vertex) const {
  for (const auto& c : conical)
    if (c.vertex == vertex) return &c;
  return nullptr;
}

bool CornerDomain::is_straight() const {
  if (!conical.empty()) return false;
  for (const auto& f : faces)
    if (f.kind != FaceKind::Plane) return false;
  for (const auto& e : edges)
    if (e.closed()) return false;
  return true;
}

double polygon_angle(const CornerDomain& d, int k) {
  const int n = static_cast<int>(d.polygon.size());
  const Vec3& v = d.vertices[d.polygon[k]].p;
  const Vec3& p = d.vertices[d.polygon[(k + n - 1) % n]].p;
  const Vec3& q = d.vertices[d.polygon[(k + 1) % n]].p;
  const Vec3 a = (q - v).normalized(), b = (p - v).normalized();
  // Counter-clockwise angle from the outgoing side to the incoming side.
  double ang = std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
  if (ang <= 0) ang += 2 * M_PI;
  return ang;
}

namespace {

// In-face unit direction orthogonal to the edge, pointing into a planar face
// whose loop traverses the edge from `from` to `to`.
Vec3 into_face(const Face& f, const Vec3& from, const Vec3& to) {
  const Vec3 t = (to - from).normalized();
  return f.normal.cross(t).normalized();
}

bool loop_traverses(const Face& f, int a, int b) {
  const std::size_t n = f.loop.size();
  for (std::size_t k = 0; k < n; ++k)
    if (f.loop[k] == a && f.loop[(k + 1) % n] == b) return true;
  return false;
}

struct EdgeFrame {
  Vec3 t, n_a, d_a, n_b, d_b;
};

EdgeFrame straight_edge_frame(const CornerDomain& d, const Edge& e) {
  const Face& fa = d.faces[e.face_a];
  const Face& fb = d.faces[e.face_b];
  const Vec3& p0 = d.vertices[e.v0].p;
  const Vec3& p1 = d.vertices[e.v1].p;
  EdgeFrame fr;
  fr.t = (p1 - p0).normalized();
  fr.n_a = fa.normal;
  fr.n_b = fb.normal;
  fr.d_a = loop_traverses(fa, e.v0, e.v1) ? into_face(fa, p0, p1) : into_face(fa, p1, p0);
  fr.d_b = loop_traverses(fb, e.v0, e.v1) ? into_face(fb, p0, p1) : into_face(fb, p1, p0);
  return fr;
}

// Curved edges are convex by assumption: each in-face direction points to
// the interior side of the other face.
EdgeFrame curved_edge_frame(const CornerDomain& d, const Edge& e, std::size_t k) {
  const std::size_t n = e.samples.size();
  const Vec3& x = e.samples[k];
  EdgeFrame fr;
  fr.t = (e.samples[(k + 1) % n] - e.samples[(k + n - 1) % n]).normalized();
  fr.n_a = d.faces[e.face_a].normal_at(x);
  fr.n_b = d.faces[e.face_b].normal_at(x);
  fr.d_a = orthogonal_part(fr.n_a.cross(fr.t), fr.t).normalized();
  fr.d_b = orthogonal_part(fr.n_b.cross(fr.t), fr.t).normalized();
  if (fr.d_a.dot(fr.n_b) > 0) fr.d_a = -fr.d_a;
  if (fr.d_b.dot(fr.n_a) > 0) fr.d_b = -fr.d_b;
  return fr;
}

std::size_t nearest_sample(const Edge& e, const Vec3& x) {
  std::size_t best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < e.samples.size(); ++k) {
    const double dd = (e.samples[k] - x).squaredNorm();
    if (dd < bd) {
      bd = dd;
      best = k;
    }
  }
  return best;
}

Vec3 newell_normal(const CornerDomain& d, const Face& f) {
  Vec3 n = Vec3::Zero();
  const std::size_t m = f.loop.size();
  for (std::size_t k = 0; k < m; ++k) {
    const Vec3& a = d.vertices[f.loop[k]].p;
    const Vec3& b = d.vertices[f.loop[(k + 1) % m]].p;
    n += Vec3((a.y() - b.y()) * (a.z() + b.z()), (a.z() - b.z()) * (a.x() + b.x()), (a.x() - b.x()) * (a.y() + b.y()));
  }
  return n;
}

}  // namespace

double edge_opening(const CornerDomain& d, const Edge& e) {
  const EdgeFrame fr = e.closed() ? curved_edge_frame(d, e, 0) : straight_edge_frame(d, e);
  return dihedral_opening(fr.n_a, fr.d_a, fr.d_b);
}

namespace {

void validate_polygon(const CornerDomain& d) {
  const std::size_t n = d.polygon.size();
  if (n < 3) throw ValidationError("incidence-closure", "polygon needs at least three vertices");
  for (int v : d.polygon)
    if (v < 0 || v >= static_cast<int>(d.vertices.size()))
      throw ValidationError("incidence-closure", "polygon references an unknown vertex");
  double area2 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Vec3& a = d.vertices[d.polygon[k]].p;
    const Vec3& b = d.vertices[d.polygon[(k + 1) % n]].p;
    if (std::abs(a.z()) > 0 || std::abs(b.z()) > 0)
      throw ValidationError("planar-coordinates", "planar vertices must have z = 0");
    area2 += a.x() * b.y() - a.y() * b.x();
  }
  if (area2 <= 0) throw ValidationError("polygon-orientation", "polygon loop must be counter-clockwise");
  // Simple polygon: no two non-adjacent sides intersect.
  auto cross2 = [](const Vec3& o, const Vec3& a, const Vec3& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      const Vec3& p1 = d.vertices[d.polygon[i]].p;
      const Vec3& p2 = d.vertices[d.polygon[(i + 1) % n]].p;
      const Vec3& q1 = d.vertices[d.polygon[j]].p;
      const Vec3& q2 = d.vertices[d.polygon[(j + 1) % n]].p;
      const double d1 = cross2(q1, q2, p1), d2 = cross2(q1, q2, p2);
      const double d3 = cross2(p1, p2, q1), d4 = cross2(p1, p2, q2);
      if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)))
        throw ValidationError("simple-polygon", "sides " + std::to_string(i) + " and " + std::to_string(j) + " cross");
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double a = polygon_angle(d, static_cast<int>(k));
    if (std::abs(a - M_PI) < 1e-12)
      throw ValidationError("corner-opening", "vertex " + d.vertices[d.polygon[k]].id + " is flat");
  }
}

}  // namespace

void CornerDomain::validate() const {
  if (dimension == 2) {
    validate_polygon(*this);
    return;
  }
  if (dimension != 3) throw ValidationError("dimension", "dimension must be 2 or 3");
  const int nv = static_cast<int>(vertices.size());
  const int nf = static_cast<int>(faces.size());

  for (const auto& f : faces) {
    if (f.kind == FaceKind::Plane) {
      if (std::abs(f.normal.norm() - 1.0) > 1e-12)
        throw ValidationError("unit-normal", "face " + f.id + " normal is not a unit vector");
      for (int v : f.loop)
        if (v < 0 || v >= nv) throw ValidationError("incidence-closure", "face " + f.id + " references an unknown vertex");
      if (f.loop.size() >= 3) {
        const Vec3 nn = newell_normal(*this, f);
        if (nn.norm() < kTangency || nn.normalized().dot(f.normal) < 1.0 - 1e-10)
          throw ValidationError("face-normal-consistency",
                                "face " + f.id + " normal disagrees with the orientation of its vertex loop");
        for (int v : f.loop)
          if (std::abs((vertices[v].p - vertices[f.loop[0]].p).dot(f.normal)) > 1e-9)
            throw ValidationError("face-planarity", "face " + f.id + " is not planar");
      }
    } else if (f.kind == FaceKind::Cone && std::abs(f.axis.norm() - 1.0) > 1e-12) {
      throw ValidationError("unit-normal", "cone face " + f.id + " axis is not a unit vector");
    }
  }

  for (const auto& e : edges) {
    if (e.face_a < 0 || e.face_a >= nf || e.face_b < 0 || e.face_b >= nf || e.face_a == e.face_b)
      throw ValidationError("incidence-closure", "edge " + e.id + " needs two distinct listed faces");
    if (e.closed()) {
      if (e.samples.size() < 8) throw ValidationError("incidence-closure", "edge " + e.id + " has too few samples");
      for (std::size_t k = 0; k < e.samples.size(); ++k) {
        const EdgeFrame fr = curved_edge_frame(*this, e, k);
        const double alpha = dihedral_opening(fr.n_a, fr.d_a, fr.d_b);
        if (std::abs(alpha - e.opening) > 1e-10)
          throw ValidationError("dihedral-opening", "edge " + e.id + " opening " + fmt(e.opening) +
                                                        " differs from the face angle " + fmt(alpha));
      }
      continue;
    }
    if (e.v0 < 0 || e.v0 >= nv || e.v1 < 0 || e.v1 >= nv || e.v0 == e.v1)
      throw ValidationError("incidence-closure", "edge " + e.id + " endpoint is not a listed vertex");
    const Face& fa = faces[e.face_a];
    const Face& fb = faces[e.face_b];
    if (fa.kind != FaceKind::Plane || fb.kind != FaceKind::Plane)
      throw ValidationError("incidence-closure", "straight edge " + e.id + " must join two planar faces");
    const bool a_fwd = loop_traverses(fa, e.v0, e.v1), a_bwd = loop_traverses(fa, e.v1, e.v0);
    const bool b_fwd = loop_traverses(fb, e.v0, e.v1), b_bwd = loop_traverses(fb, e.v1, e.v0);
    if (!(a_fwd || a_bwd) || !(b_fwd || b_bwd))
      throw ValidationError("incidence-closure", "edge " + e.id + " is not a side of both of its faces");
    if (a_fwd == b_fwd) throw ValidationError("face-normal-consistency", "faces of edge " + e.id + " are not coherently oriented");
    const EdgeFrame fr = straight_edge_frame(*this, e);
    const double alpha = dihedral_opening(fr.n_a, fr.d_a, fr.d_b);
    if (std::abs(alpha - e.opening) > 1e-10)
      throw ValidationError("dihedral-opening",
                            "edge " + e.id + " opening " + fmt(e.opening) + " differs from the face angle " + fmt(alpha));
  }

  // Every side of every planar loop is a listed edge.
  std::set<std::pair<int, int>> sides;
  for (const auto& e : edges)
    if (!e.closed()) sides.insert({std::min(e.v0, e.v1), std::max(e.v0, e.v1)});
  for (const auto& f : faces) {
    const std::size_t m = f.loop.size();
    for (std::size_t k = 0; k < m && m >= 3; ++k) {
      const int a = f.loop[k], b = f.loop[(k + 1) % m];
      if (!sides.count({std::min(a, b), std::max(a, b)}))
        throw ValidationError("incidence-closure", "side " + vertices[a].id + "-" + vertices[b].id + " of face " + f.id +
                                                       " is not a listed edge");
    }
  }

  for (const auto& c : conical) {
    if (c.vertex < 0 || c.vertex >= nv) throw ValidationError("incidence-closure", "conical vertex is not listed");
    for (const auto& e : edges)
      if (!e.closed() && (e.v0 == c.vertex || e.v1 == c.vertex))
        throw ValidationError("conical-vertex-isolation",
                              "conical vertex " + vertices[c.vertex].id + " lies on straight edge " + e.id);
    if (!(c.aperture > 0 && c.aperture < M_PI))
      throw ValidationError("conical-aperture", "aperture must lie in (0, pi)");
  }

  if (is_straight()) {
    const long chi = static_cast<long>(vertices.size()) - static_cast<long>(edges.size()) + static_cast<long>(faces.size());
    if (chi != 2)
      throw ValidationError("euler-characteristic", "V - E + F = " + std::to_string(chi) + ", expected 2");
    double volume6 = 0.0;
    for (const auto& f : faces) {
      for (std::size_t k = 1; k + 1 < f.loop.size(); ++k)
        volume6 += vertices[f.loop[0]].p.dot(vertices[f.loop[k]].p.cross(vertices[f.loop[k + 1]].p));
    }
    if (volume6 <= 0) throw ValidationError("face-normal-consistency", "face normals point into the solid");
  }
}

// ---------------------------------------------------------------- strata

std::vector<Stratum> stratify(const CornerDomain& d) {
  std::vector<Stratum> out;
  int id = 0;
  out.push_back({id++, 0, Carrier::Interior, -1, "interior"});
  if (d.dimension == 2) {
    const int n = static_cast<int>(d.polygon.size());
    for (int k = 0; k < n; ++k) {
      const auto& a = d.vertices[d.polygon[k]].id;
      const auto& b = d.vertices[d.polygon[(k + 1) % n]].id;
      out.push_back({id++, 1, Carrier::Edge, k, "side " + a + "-" + b});
    }
    for (int k = 0; k < n; ++k) out.push_back({id++, 2, Carrier::Vertex, k, "corner " + d.vertices[d.polygon[k]].id});
    return out;
  }
  for (std::size_t k = 0; k < d.faces.size(); ++k)
    out.push_back({id++, 1, Carrier::Face, static_cast<int>(k), "face " + d.faces[k].id});
  for (std::size_t k = 0; k < d.edges.size(); ++k)
    out.push_back({id++, 2, Carrier::Edge, static_cast<int>(k), "edge " + d.edges[k].id});
  for (std::size_t k = 0; k < d.vertices.size(); ++k)
    out.push_back({id++, 3, Carrier::Vertex, static_cast<int>(k), "vertex " + d.vertices[k].id});
  return out;
}

namespace {

std::vector<int> incident_faces(const CornerDomain& d, int v) {
  std::vector<int> out;
  for (std::size_t f = 0; f < d.faces.size(); ++f)
    if (std::find(d.faces[f].loop.begin(), d.faces[f].loop.end(), v) != d.faces[f].loop.end())
      out.push_back(static_cast<int>(f));
  return out;
}

// Rays of the edges at a polyhedral vertex in cyclic order, walking from
// face to face around the vertex.
ConeDescriptor vertex_cone(const CornerDomain& d, int v) {
  const auto faces = incident_faces(d, v);
  if (faces.size() < 3) throw UnsupportedGeometry("vertex " + d.vertices[v].id + " has fewer than three faces");
  std::map<int, int> next;  // neighbour vertex q -> neighbour vertex p within one face
  std::map<int, int> face_of;
  for (int f : faces) {
    const auto& loop = d.faces[f].loop;
    const std::size_t m = loop.size();
    const std::size_t k = std::find(loop.begin(), loop.end(), v) - loop.begin();
    const int p = loop[(k + m - 1) % m], q = loop[(k + 1) % m];
    if (next.count(q)) throw UnsupportedGeometry("vertex " + d.vertices[v].id + " is not a manifold vertex");
    next[q] = p;
    face_of[q] = f;
  }
  std::vector<Vec3> rays;
  std::vector<Vec3> normals;
  int cur = next.begin()->first;
  for (std::size_t step = 0; step < faces.size(); ++step) {
    rays.push_back((d.vertices[cur].p - d.vertices[v].p).normalized());
    normals.push_back(d.faces[face_of[cur]].normal);
    if (!next.count(cur)) throw UnsupportedGeometry("vertex " + d.vertices[v].id + " section is not a closed polygon");
    cur = next[cur];
  }
  if (cur != next.begin()->first) throw UnsupportedGeometry("vertex " + d.vertices[v].id + " has several sections");
  // The face between rays k and k+1 is face_of[ray k].
  return ConeDescriptor::polyhedral_cone(rays, d.vertices[v].p, normals);
}

bool inside_convex_faces(const CornerDomain& d, const Vec3& x) {
  for (const auto& f : d.faces) {
    switch (f.kind) {
      case FaceKind::Plane: {
        Vec3 p = f.center;
        if (!f.loop.empty()) p = d.vertices[f.loop[0]].p;
        if ((x - p).dot(f.normal) > 0) return false;
        break;
      }
      case FaceKind::Sphere:
        if (((x - f.center).norm() > f.radius) != f.inward) return false;
        break;
      case FaceKind::Cone: {
        const Vec3 r = x - f.center;
        if (r.norm() == 0.0 || r.normalized().dot(f.axis) < std::cos(f.aperture)) return false;
        break;
      }
    }
  }
  return true;
}

// Generalized winding number of a closed triangulated surface.
double winding_number(const CornerDomain& d, const Vec3& x) {
  double total = 0.0;
  for (const auto& f : d.faces) {
    for (std::size_t k = 1; k + 1 < f.loop.size(); ++k) {
      const Vec3 a = d.vertices[f.loop[0]].p - x, b = d.vertices[f.loop[k]].p - x, c = d.vertices[f.loop[k + 1]].p - x;
      const double la = a.norm(), lb = b.norm(), lc = c.norm();
      const double num = a.dot(b.cross(c));
      const double den = la * lb * lc + a.dot(b) * lc + b.dot(c) * la + c.dot(a) * lb;
      total += 2.0 * std::atan2(num, den);
    }
  }
  return total / (4 * M_PI);
}

bool inside_polygon(const CornerDomain& d, const Vec3& x) {
  bool in = false;
  const std::size_t n = d.polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec3& a = d.vertices[d.polygon[i]].p;
    const Vec3& b = d.vertices[d.polygon[j]].p;
    if ((a.y() > x.y()) != (b.y() > x.y()) && x.x() < (b.x() - a.x()) * (x.y() - a.y()) / (b.y() - a.y()) + a.x())
      in = !in;
  }
  return in;
}

// Ear clipping of a planar face, in the coordinates of its plane.
std::vector<std::array<int, 3>> triangulate_face(const CornerDomain& d, const Face& f) {
  const Vec3 u = any_orthogonal(f.normal), w = f.normal.cross(u);
  std::vector<int> idx(f.loop.begin(), f.loop.end());
  auto pt = [&](int v) { return Eigen::Vector2d(d.vertices[v].p.dot(u), d.vertices[v].p.dot(w)); };
  auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };
  std::vector<std::array<int, 3>> tris;
  int guard = 0;
  while (idx.size() > 3 && guard++ < 10000) {
    const std::size_t m = idx.size();
    bool clipped = false;
    for (std::size_t k = 0; k < m; ++k) {
      const int a = idx[(k + m - 1) % m], b = idx[k], c = idx[(k + 1) % m];
      if (cross(pt(a), pt(b), pt(c)) <= 0) continue;
      bool empty = true;
      for (int o : idx) {
        if (o == a || o == b || o == c) continue;
        const auto p = pt(o);
        if (cross(pt(a), pt(b), p) >= 0 && cross(pt(b), pt(c), p) >= 0 && cross(pt(c), pt(a), p) >= 0) {
          empty = false;
          break;
        }
      }
      if (!empty) continue;
      tris.push_back({a, b, c});
      idx.erase(idx.begin() + static_cast<long>(k));
      clipped = true;
      break;
    }
    if (!clipped) throw MeshFailure("face " + f.id + " could not be triangulated");
  }
  if (idx.size() == 3) tris.push_back({idx[0], idx[1], idx[2]});
  return tris;
}

std::vector<Vec3> boundary_samples_of_face(const CornerDomain& d, int face) {
  std::vector<Vec3> out;
  for (const auto& e : d.edges)
    if (e.closed() && (e.face_a == face || e.face_b == face)) out.insert(out.end(), e.samples.begin(), e.samples.end());
  return out;
}

Vec3 project_to_face(const Face& f, const Vec3& x) {
  if (f.kind == FaceKind::Sphere) return f.center + f.radius * (x - f.center).normalized();
  return x;
}

}  // namespace

Vec3 representative_point(const CornerDomain& d, const Stratum& s) {
  switch (s.carrier) {
    case Carrier::Vertex:
      return d.dimension == 2 ? d.vertices[d.polygon[s.element]].p : d.vertices[s.element].p;
    case Carrier::Edge: {
      if (d.dimension == 2) {
        const int n = static_cast<int>(d.polygon.size());
        return 0.5 * (d.vertices[d.polygon[s.element]].p + d.vertices[d.polygon[(s.element + 1) % n]].p);
      }
      const Edge& e = d.edges[s.element];
      if (e.closed()) return e.samples.front();
      return 0.5 * (d.vertices[e.v0].p + d.vertices[e.v1].p);
    }
    case Carrier::Face:
    case Carrier::Interior: {
      const auto pts = sample_points(d, s, 4);
      if (pts.empty()) throw InvalidDomain("stratum " + s.label + " has no sample points");
      return pts.front();
    }
  }
  return Vec3::Zero();
}

std::vector<Vec3> sample_points(const CornerDomain& d, const Stratum& s, int n) {
  if (n < 1) throw std::invalid_argument("sample_points: n must be positive");
  std::vector<Vec3> out;
  switch (s.carrier) {
    case Carrier::Vertex:
      out.push_back(representative_point(d, s));
      break;
    case Carrier::Edge: {
      if (d.dimension == 2 || !d.edges[s.element].closed()) {
        Vec3 a, b;
        if (d.dimension == 2) {
          const int m = static_cast<int>(d.polygon.size());
          a = d.vertices[d.polygon[s.element]].p;
          b = d.vertices[d.polygon[(s.element + 1) % m]].p;
        } else {
          a = d.vertices[d.edges[s.element].v0].p;
          b = d.vertices[d.edges[s.element].v1].p;
        }
        for (int k = 0; k < n; ++k) out.push_back(a + (k + 0.5) / n * (b - a));
      } else {
        const auto& smp = d.edges[s.element].samples;
        const std::size_t stride = std::max<std::size_t>(1, smp.size() / static_cast<std::size_t>(n));
        for (std::size_t k = 0; k < smp.size(); k += stride) out.push_back(smp[k]);
      }
      break;
    }
    case Carrier::Face: {
      const Face& f = d.faces[s.element];
      if (f.kind == FaceKind::Plane && f.loop.size() >= 3) {
        for (const auto& t : triangulate_face(d, f)) {
          const Vec3 &a = d.vertices[t[0]].p, &b = d.vertices[t[1]].p, &c = d.vertices[t[2]].p;
          for (int i = 1; i < n; ++i)
            for (int j = 1; i + j < n; ++j) {
              const double u = static_cast<double>(i) / n, v = static_cast<double>(j) / n;
              out.push_back(a + u * (b - a) + v * (c - a));
            }
          if (n < 3) out.push_back((a + b + c) / 3.0);
        }
      } else {
        const auto bd = boundary_samples_of_face(d, s.element);
        if (bd.empty()) break;
        Vec3 hub;
        if (f.kind == FaceKind::Cone) {
          hub = f.center;
        } else {
          hub = Vec3::Zero();
          for (const auto& p : bd) hub += p;
          hub /= static_cast<double>(bd.size());
          if (f.kind == FaceKind::Sphere) hub = f.center + f.radius * (hub - f.center).normalized() * (f.inward ? -1.0 : 1.0);
        }
        const std::size_t stride = std::max<std::size_t>(1, bd.size() / static_cast<std::size_t>(n));
        for (std::size_t k = 0; k < bd.size(); k += stride)
          for (int i = 1; i < n; ++i) out.push_back(project_to_face(f, hub + (static_cast<double>(i) / n) * (bd[k] - hub)));
      }
      break;
    }
    case Carrier::Interior: {
      Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity()), hi = -lo;
      auto grow = [&](const Vec3& p) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
      };
      for (const auto& v : d.vertices) grow(v.p);
      for (const auto& e : d.edges)
        for (const auto& p : e.samples) grow(p);
      const int nz = d.dimension == 2 ? 1 : n;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < nz; ++k) {
            Vec3 x(lo.x() + (i + 0.5) / n * (hi.x() - lo.x()), lo.y() + (j + 0.5) / n * (hi.y() - lo.y()),
                   d.dimension == 2 ? 0.0 : lo.z() + (k + 0.5) / nz * (hi.z() - lo.z()));
            bool in;
            if (d.dimension == 2)
              in = inside_polygon(d, x);
            else if (d.is_straight())
              in = winding_number(d, x) > 0.5;
            else
              in = inside_convex_faces(d, x);
            if (in) out.push_back(x);
          }
      break;
    }
  }
  return out;
}

ConeDescriptor tangent_cone_at(const CornerDomain& d, const Stratum& s, const Vec3& x) {
  ConeDescriptor c;
  if (d.dimension == 2) {
    const int n = static_cast<int>(d.polygon.size());
    switch (s.carrier) {
      case Carrier::Interior:
        c = ConeDescriptor::full_space(x);
        break;
      case Carrier::Edge: {
        const Vec3 t = (d.vertices[d.polygon[(s.element + 1) % n]].p - d.vertices[d.polygon[s.element]].p).normalized();
        c = ConeDescriptor::half_space(Vec3(t.y(), -t.x(), 0.0), x);
        break;
      }
      case Carrier::Vertex: {
        const Vec3& v = d.vertices[d.polygon[s.element]].p;
        const Vec3& p = d.vertices[d.polygon[(s.element + n - 1) % n]].p;
        const Vec3& q = d.vertices[d.polygon[(s.element + 1) % n]].p;
        const Vec3 tin = (v - p).normalized(), tout = (q - v).normalized();
        const Vec3 n_in(tin.y(), -tin.x(), 0.0), n_out(tout.y(), -tout.x(), 0.0);
        c = ConeDescriptor::wedge_from_faces(Vec3::UnitZ(), n_in, (p - v).normalized(), n_out, tout, v);
        break;
      }
      case Carrier::Face:
        throw InvalidDomain("planar domains have no face strata");
    }
    c.ambient_dimension = 2;
    return c;
  }
  switch (s.carrier) {
    case Carrier::Interior:
      return ConeDescriptor::full_space(x);
    case Carrier::Face:
      return ConeDescriptor::half_space(d.faces[s.element].normal_at(x), x);
    case Carrier::Edge: {
      const Edge& e = d.edges[s.element];
      const EdgeFrame fr = e.closed() ? curved_edge_frame(d, e, nearest_sample(e, x)) : straight_edge_frame(d, e);
      return ConeDescriptor::wedge_from_faces(fr.t, fr.n_a, fr.d_a, fr.n_b, fr.d_b, x);
    }
    case Carrier::Vertex: {
      if (const auto* cv = d.conical_at(s.element)) return ConeDescriptor::circular_cone(cv->aperture, cv->axis, x);
      return vertex_cone(d, s.element);
    }
  }
  return c;
}

// ---------------------------------------------------------------- chains

namespace {

std::pair<Vec3, Vec3> circle_basis(const Vec3& axis) {
  const Vec3 p = any_orthogonal(axis);
  return {p, axis.cross(p)};
}

ConeDescriptor step(const ConeDescriptor& c, const Selector& s) {
  ConeDescriptor out;
  switch (s.kind) {
    case SelectorKind::SectionInterior:
      if (c.kind == ConeKind::FullSpace) throw std::invalid_argument("full space has no singular section points");
      out = ConeDescriptor::full_space(c.base);
      break;
    case SelectorKind::SectionEnd: {
      if (c.kind != ConeKind::Wedge) throw std::invalid_argument("section end needs a wedge");
      const auto [np, nm] = c.wedge_face_normals();
      out = ConeDescriptor::half_space(s.index > 0 ? np : nm, c.base);
      break;
    }
    case SelectorKind::SectionSide:
      if (c.kind != ConeKind::Cone3D || c.section != SectionKind::Polygon)
        throw std::invalid_argument("section side needs a polyhedral cone");
      out = ConeDescriptor::half_space(c.face_normals.at(s.index), c.base);
      break;
    case SelectorKind::SectionVertex: {
      if (c.kind != ConeKind::Cone3D || c.section != SectionKind::Polygon)
        throw std::invalid_argument("section vertex needs a polyhedral cone");
      const std::size_t n = c.rays.size(), k = static_cast<std::size_t>(s.index);
      const Vec3& r = c.rays.at(k);
      const Vec3 d_a = orthogonal_part(c.rays[(k + n - 1) % n], r).normalized();
      const Vec3 d_b = orthogonal_part(c.rays[(k + 1) % n], r).normalized();
      out = ConeDescriptor::wedge_from_faces(r, c.face_normals[(k + n - 1) % n], d_a, c.face_normals[k], d_b, c.base);
      break;
    }
    case SelectorKind::ConicalGenerator: {
      if (c.kind != ConeKind::Cone3D || c.section != SectionKind::Circle)
        throw std::invalid_argument("generator needs a circular cone");
      const auto [p, q] = circle_basis(c.axis);
      const Vec3 g = std::cos(c.aperture) * c.axis + std::sin(c.aperture) * (std::cos(s.param) * p + std::sin(s.param) * q);
      out = ConeDescriptor::half_space(g.dot(c.axis) * g - c.axis, c.base);
      break;
    }
  }
  out.ambient_dimension = c.ambient_dimension;
  return out;
}

std::vector<Selector> section_points(const ConeDescriptor& c, int family_samples) {
  std::vector<Selector> out;
  switch (c.kind) {
    case ConeKind::FullSpace:
      break;
    case ConeKind::HalfSpace:
      out.push_back({SelectorKind::SectionInterior, 0, 0.0});
      break;
    case ConeKind::Wedge:
      out.push_back({SelectorKind::SectionInterior, 0, 0.0});
      out.push_back({SelectorKind::SectionEnd, -1, 0.0});
      out.push_back({SelectorKind::SectionEnd, +1, 0.0});
      break;
    case ConeKind::Cone3D:
      out.push_back({SelectorKind::SectionInterior, 0, 0.0});
      if (c.section == SectionKind::Polygon) {
        for (std::size_t k = 0; k < c.rays.size(); ++k) out.push_back({SelectorKind::SectionSide, static_cast<int>(k), 0.0});
        for (std::size_t k = 0; k < c.rays.size(); ++k)
          out.push_back({SelectorKind::SectionVertex, static_cast<int>(k), 0.0});
      } else {
        for (int k = 0; k < family_samples; ++k)
          out.push_back({SelectorKind::ConicalGenerator, 0, 2 * M_PI * k / family_samples});
      }
      break;
  }
  return out;
}

void grow_tree(const SingularChain& chain, int family_samples, std::vector<SingularChain>& out) {
  out.push_back(chain);
  for (const auto& s : section_points(chain.tangent, family_samples)) {
    SingularChain next = chain;
    next.entries.push_back(s);
    next.tangent = step(chain.tangent, s);
    next.reduced_dims.push_back(next.tangent.reduced_dimension());
    grow_tree(next, family_samples, out);
  }
}

SingularChain root_chain(const ConeDescriptor& root) {
  SingularChain c;
  c.base = root.base;
  c.tangent = root;
  c.reduced_dims = {root.reduced_dimension()};
  return c;
}

}  // namespace

ConeDescriptor follow_chain(const ConeDescriptor& cone, const std::vector<Selector>& entries) {
  ConeDescriptor c = cone;
  for (const auto& s : entries) c = step(c, s);
  return c;
}

std::vector<SingularChain> enumerate_chains(const ConeDescriptor& root, int family_samples) {
  std::vector<SingularChain> out;
  grow_tree(root_chain(root), family_samples, out);
  return out;
}

std::vector<SingularChain> ChainClasses::sampled(int n) const {
  std::vector<SingularChain> out = classes;
  for (const auto& f : families)
    for (int k = 0; k < n; ++k) out.push_back(f.sample(2 * M_PI * k / n));
  return out;
}

ChainClasses enumerate_chain_classes(const ConeDescriptor& root) {
  ChainClasses out;
  const bool circle = root.kind == ConeKind::Cone3D && root.section == SectionKind::Circle;
  // Depth-first order visits shorter representatives of a class first.
  for (auto& chain : enumerate_chains(root, circle ? 0 : 64)) {
    bool seen = false;
    for (const auto& c : out.classes) seen = seen || c.tangent.same_shape(chain.tangent, 1e-12);
    if (!seen) out.classes.push_back(std::move(chain));
  }
  std::stable_sort(out.classes.begin(), out.classes.end(),
                   [](const SingularChain& a, const SingularChain& b) { return a.length() < b.length(); });
  if (circle) {
    ChainFamily fam;
    fam.label = "generator half-spaces";
    fam.sample = [root](double phi) {
      SingularChain c = root_chain(root);
      c.entries.push_back({SelectorKind::ConicalGenerator, 0, phi});
      c.tangent = step(root, c.entries.back());
      c.reduced_dims.push_back(c.tangent.reduced_dimension());
      return c;
    };
    out.families.push_back(std::move(fam));
  }
  return out;
}

ChainClasses enumerate_chain_classes(const CornerDomain& d, const Stratum& s, const Vec3& x) {
  return enumerate_chain_classes(tangent_cone_at(d, s, x));
}

bool chain_leq(const SingularChain& x, const SingularChain& y) {
  if (x.entries.size() > y.entries.size()) return false;
  if ((x.base - y.base).norm() > 0) return false;
  for (std::size_t k = 0; k < x.entries.size(); ++k)
    if (!(x.entries[k] == y.entries[k])) return false;
  return true;
}

namespace {

double wedge_map_defect(const ConeDescriptor& a, const ConeDescriptor& b) {
  const bool a_convex = a.opening < M_PI, b_convex = b.opening < M_PI;
  if (a_convex != b_convex) return std::numeric_limits<double>::infinity();
  const double k = std::tan(0.5 * b.opening) / std::tan(0.5 * a.opening);
  const Eigen::Matrix3d Fa = a.wedge_frame();
  double best = std::numeric_limits<double>::infinity();
  // The wedge is symmetric under the half-turn about its bisector.
  for (double s : {1.0, -1.0}) {
    Eigen::Matrix3d Fb = b.wedge_frame();
    Fb.col(0) *= s;
    Fb.col(2) *= s;
    const Eigen::Matrix3d L = Fb * Eigen::Vector3d(1.0, 1.0, k).asDiagonal() * Fa.transpose();
    const double defect = (L - Eigen::Matrix3d::Identity()).jacobiSvd().singularValues()(0);
    best = std::min(best, defect);
  }
  return best;
}

}  // namespace

double chain_distance_upper(const SingularChain& x, const SingularChain& y) {
  const double base = (x.base - y.base).norm();
  const ConeDescriptor& a = x.tangent;
  const ConeDescriptor& b = y.tangent;
  if (a.reduced_dimension() != b.reduced_dimension() || a.kind != b.kind)
    return std::numeric_limits<double>::infinity();
  if (a.same_shape(b, 0.0)) return base;
  switch (a.kind) {
    case ConeKind::FullSpace:
      return base;
    case ConeKind::HalfSpace:
      // Minimal rotation taking one normal to the other: ||R - I|| = 2 sin(phi/2) = |n - n'|.
      return base + (a.normal - b.normal).norm();
    case ConeKind::Wedge:
      return base + wedge_map_defect(a, b);
    case ConeKind::Cone3D:
      throw UnsupportedGeometry("distance between distinct three-dimensional cones");
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace magcorner::geometry
