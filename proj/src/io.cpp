#include "magcorner/io.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include <Eigen/Geometry>

#include "magcorner/errors.hpp"

namespace magcorner::io {

using geometry::Vec3;

namespace {

constexpr const char* kDomainHeader = "# magcorner domain v1";

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& tok, int line) {
  std::string t = tok;
  double scale = 1.0;
  if (t.size() >= 2 && t.compare(t.size() - 2, 2, "pi") == 0) {
    scale = M_PI;
    t.resize(t.size() - 2);
    if (t.empty() || t == "+") t = "1";
    if (t == "-") t = "-1";
    if (t.back() == '*') t.pop_back();
  }
  const char* b = t.c_str();
  char* end = nullptr;
  const double v = std::strtod(b, &end);
  if (t.empty() || end != b + t.size() || !std::isfinite(v)) throw ParseError(line, "expected a number, got '" + tok + "'");
  return v * scale;
}

/// Cursor over the tokens of one record.
class Tokens {
 public:
  Tokens(std::vector<std::string> toks, int line) : toks_(std::move(toks)), line_(line) {}

  bool done() const { return pos_ >= toks_.size(); }
  int line() const { return line_; }
  const std::string& peek() const {
    if (done()) throw ParseError(line_, "unexpected end of record");
    return toks_[pos_];
  }
  std::string word() {
    const std::string& w = peek();
    ++pos_;
    return w;
  }
  void expect(const std::string& w) {
    if (done() || toks_[pos_] != w) throw ParseError(line_, "expected '" + w + "'");
    ++pos_;
  }
  bool accept(const std::string& w) {
    if (!done() && toks_[pos_] == w) {
      ++pos_;
      return true;
    }
    return false;
  }
  double number() { return parse_number(word(), line_); }
  Vec3 vec3() {
    const double x = number(), y = number(), z = number();
    return {x, y, z};
  }
  void finish() const {
    if (!done()) throw ParseError(line_, "unexpected token '" + toks_[pos_] + "'");
  }

 private:
  std::vector<std::string> toks_;
  std::size_t pos_ = 0;
  int line_;
};

int vertex_ref(const geometry::CornerDomain& d, const std::string& id, int line) {
  const int v = d.vertex_index(id);
  if (v < 0) throw ParseError(line, "unknown vertex '" + id + "'");
  return v;
}

int face_ref(const geometry::CornerDomain& d, const std::string& id, int line) {
  const int f = d.face_index(id);
  if (f < 0) throw ParseError(line, "unknown face '" + id + "'");
  return f;
}

Vec3 unit(const Vec3& v, int line, const char* what) {
  if (v.norm() < 1e-12) throw ParseError(line, std::string(what) + " must be nonzero");
  return v.normalized();
}

std::vector<Vec3> circle_samples(const Vec3& c, const Vec3& n, double r, int count) {
  const Vec3 u = n.unitOrthogonal();
  const Vec3 v = n.cross(u);
  std::vector<Vec3> out;
  for (int k = 0; k < count; ++k) {
    const double t = 2.0 * M_PI * k / count;
    out.push_back(c + r * (std::cos(t) * u + std::sin(t) * v));
  }
  return out;
}

/// "x: c c c ; y: c c" into per-component coefficient arrays.
template <std::size_t N>
std::vector<std::array<double, N>> component_lists(const std::string& body, const std::vector<std::string>& names,
                                                   int line) {
  std::vector<std::array<double, N>> out(names.size(), std::array<double, N>{});
  std::vector<bool> seen(names.size(), false);
  std::stringstream ss(body);
  for (std::string part; std::getline(ss, part, ';');) {
    part = trim(part);
    if (part.empty()) continue;
    const auto colon = part.find(':');
    if (colon == std::string::npos) throw ParseError(line, "expected 'component: coefficients'");
    const std::string name = trim(part.substr(0, colon));
    std::size_t c = 0;
    while (c < names.size() && names[c] != name) ++c;
    if (c == names.size()) throw ParseError(line, "unknown component '" + name + "'");
    if (seen[c]) throw ParseError(line, "component '" + name + "' given twice");
    seen[c] = true;
    const auto toks = split_ws(part.substr(colon + 1));
    if (toks.size() > N) throw ParseError(line, "too many coefficients for component '" + name + "'");
    for (std::size_t k = 0; k < toks.size(); ++k) out[c][k] = parse_number(toks[k], line);
  }
  return out;
}

}  // namespace

geometry::CornerDomain parse_domain(const std::string& text) {
  using geometry::Edge;
  using geometry::Face;
  using geometry::FaceKind;
  geometry::CornerDomain d;
  d.dimension = 0;
  std::vector<bool> opening_given;

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  bool header = false;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty()) continue;
    if (!header) {
      if (s != kDomainHeader) throw ParseError(line, std::string("expected header '") + kDomainHeader + "'");
      header = true;
      continue;
    }
    if (s[0] == '#') continue;
    Tokens t(split_ws(s.substr(0, s.find('#'))), line);
    const std::string kind = t.word();

    if (kind == "dimension") {
      if (d.dimension != 0) throw ParseError(line, "dimension given twice");
      const double dim = t.number();
      if (dim != 2 && dim != 3) throw ParseError(line, "dimension must be 2 or 3");
      d.dimension = static_cast<int>(dim);
    } else if (d.dimension == 0) {
      throw ParseError(line, "dimension must come first");
    } else if (kind == "vertex") {
      geometry::Vertex v;
      v.id = t.word();
      if (d.vertex_index(v.id) >= 0) throw ParseError(line, "duplicate vertex '" + v.id + "'");
      v.p.x() = t.number();
      v.p.y() = t.number();
      if (d.dimension == 3 || !t.done()) v.p.z() = t.number();
      d.vertices.push_back(v);
    } else if (kind == "face") {
      if (d.dimension != 3) throw ParseError(line, "faces need dimension 3");
      Face f;
      f.id = t.word();
      if (d.face_index(f.id) >= 0) throw ParseError(line, "duplicate face '" + f.id + "'");
      const std::string fk = t.word();
      if (fk == "plane") {
        f.kind = FaceKind::Plane;
        f.normal = t.vec3();
        if (t.accept("loop"))
          while (!t.done()) f.loop.push_back(vertex_ref(d, t.word(), line));
        else if (t.accept("through"))
          f.center = t.vec3();
        else
          throw ParseError(line, "plane face needs 'loop' or 'through'");
      } else if (fk == "sphere") {
        f.kind = FaceKind::Sphere;
        f.center = t.vec3();
        f.radius = t.number();
        if (!(f.radius > 0)) throw ParseError(line, "sphere radius must be positive");
        f.inward = t.accept("inward");
      } else if (fk == "cone") {
        f.kind = FaceKind::Cone;
        f.center = t.vec3();
        f.axis = unit(t.vec3(), line, "cone axis");
        f.aperture = t.number();
      } else {
        throw ParseError(line, "unknown face kind '" + fk + "'");
      }
      d.faces.push_back(f);
    } else if (kind == "edge") {
      if (d.dimension != 3) throw ParseError(line, "edges need dimension 3");
      Edge e;
      e.id = t.word();
      if (t.accept("circle")) {
        const Vec3 c = t.vec3();
        const Vec3 n = unit(t.vec3(), line, "circle normal");
        const double r = t.number();
        t.expect("samples");
        const double count = t.number();
        if (!(r > 0) || count < 8 || count != std::floor(count))
          throw ParseError(line, "circle needs a positive radius and at least 8 samples");
        e.samples = circle_samples(c, n, r, static_cast<int>(count));
      } else {
        e.v0 = vertex_ref(d, t.word(), line);
        e.v1 = vertex_ref(d, t.word(), line);
      }
      t.expect("faces");
      e.face_a = face_ref(d, t.word(), line);
      e.face_b = face_ref(d, t.word(), line);
      const bool given = t.accept("opening");
      if (given) e.opening = t.number();
      if (!e.closed()) e.direction = (d.vertices[e.v1].p - d.vertices[e.v0].p).normalized();
      d.edges.push_back(e);
      opening_given.push_back(given);
    } else if (kind == "conical") {
      geometry::ConicalVertex c;
      c.vertex = vertex_ref(d, t.word(), line);
      t.expect("aperture");
      c.aperture = t.number();
      t.expect("axis");
      c.axis = unit(t.vec3(), line, "conical axis");
      d.conical.push_back(c);
    } else if (kind == "polygon") {
      if (d.dimension != 2) throw ParseError(line, "polygon needs dimension 2");
      if (!d.polygon.empty()) throw ParseError(line, "polygon given twice");
      while (!t.done()) d.polygon.push_back(vertex_ref(d, t.word(), line));
    } else {
      throw ParseError(line, "unknown record '" + kind + "'");
    }
    t.finish();
  }
  if (!header) throw ParseError(line + 1, "empty document");
  if (d.dimension == 0) throw ParseError(line + 1, "missing dimension");

  for (std::size_t k = 0; k < d.edges.size(); ++k)
    if (!opening_given[k]) d.edges[k].opening = geometry::edge_opening(d, d.edges[k]);
  d.validate();
  return d;
}

geometry::CornerDomain load_domain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_domain(ss.str());
}

energy::FieldSpec parse_field(const std::string& text, const oracle::Gauge* gauge) {
  const std::string s = trim(text);
  energy::FieldSpec field;
  if (s.rfind("constant", 0) == 0) {
    Tokens t(split_ws(s.substr(8)), 1);
    std::vector<double> v;
    while (!t.done()) v.push_back(t.number());
    if (v.size() == 1)
      field = energy::FieldSpec::constant_field({0, 0, v[0]});
    else if (v.size() == 2)
      field = energy::FieldSpec::constant_field({v[0], v[1], 0});
    else if (v.size() == 3)
      field = energy::FieldSpec::constant_field({v[0], v[1], v[2]});
    else
      throw ParseError(1, "constant field takes 1, 2 or 3 numbers");
  } else if (s.rfind("polynomial", 0) == 0) {
    const auto lists = component_lists<10>(s.substr(10), {"x", "y", "z"}, 1);
    std::array<std::array<double, 10>, 3> c{};
    for (int i = 0; i < 3; ++i) c[i] = lists[i];
    // Monomials 1 x y z xx xy xz yy yz zz.
    const double div[4] = {c[0][1] + c[1][2] + c[2][3], 2 * c[0][4] + c[1][5] + c[2][6],
                           c[0][5] + 2 * c[1][7] + c[2][8], c[0][6] + c[1][8] + 2 * c[2][9]};
    for (double x : div)
      if (std::abs(x) > 1e-10) throw ValidationError("divergence-free", "polynomial field has nonzero divergence");
    field = energy::FieldSpec::polynomial(c);
  } else {
    throw ParseError(1, "field must start with 'constant' or 'polynomial'");
  }

  if (gauge) {
    for (int i = -2; i <= 2; ++i)
      for (int j = -2; j <= 2; ++j) {
        const Eigen::Vector2d p(0.5 * i, 0.5 * j);
        const double declared = field(Vec3(p.x(), p.y(), 0)).z();
        if (std::abs(gauge->curl(p) - declared) > 1e-10)
          throw CurlMismatch("curl of the gauge differs from the declared field at (" + std::to_string(p.x()) + ", " +
                             std::to_string(p.y()) + ")");
      }
  }
  return field;
}

oracle::Gauge parse_gauge(const std::string& text) {
  const std::string s = trim(text);
  if (s.rfind("symmetric", 0) == 0) {
    Tokens t(split_ws(s.substr(9)), 1);
    const double b = t.number();
    Eigen::Vector2d c = Eigen::Vector2d::Zero();
    if (!t.done()) {
      c.x() = t.number();
      c.y() = t.number();
    }
    t.finish();
    return oracle::Gauge::symmetric(b, c);
  }
  if (s.rfind("polynomial", 0) == 0) {
    const auto lists = component_lists<10>(s.substr(10), {"x", "y"}, 1);
    oracle::Gauge g;
    g.coeffs[0] = lists[0];
    g.coeffs[1] = lists[1];
    return g;
  }
  throw ParseError(1, "gauge must start with 'symmetric' or 'polynomial'");
}

geometry::ConeDescriptor parse_cone(const std::string& text) {
  using geometry::ConeDescriptor;
  const std::string s = trim(text);
  const auto head = split_ws(s);
  if (head.empty()) throw ParseError(1, "empty cone");
  const std::string kind = head[0];
  if (kind == "polycone") {
    std::vector<Vec3> rays;
    std::stringstream ss(s.substr(8));
    for (std::string part; std::getline(ss, part, ';');) {
      Tokens t(split_ws(part), 1);
      rays.push_back(unit(t.vec3(), 1, "ray"));
      t.finish();
    }
    return ConeDescriptor::polyhedral_cone(rays);
  }
  Tokens t({head.begin() + 1, head.end()}, 1);
  ConeDescriptor c;
  if (kind == "fullspace") {
    c = ConeDescriptor::full_space();
  } else if (kind == "halfspace") {
    c = ConeDescriptor::half_space(unit(t.vec3(), 1, "normal"));
  } else if (kind == "wedge") {
    const double alpha = t.number();
    const Vec3 e = unit(t.vec3(), 1, "edge");
    const Vec3 b = unit(t.vec3(), 1, "bisector");
    if (std::abs(e.dot(b)) > 1e-12) throw InvalidDomain("bisector must be orthogonal to the edge");
    c = ConeDescriptor::wedge(alpha, e, b);
  } else if (kind == "octant") {
    c = ConeDescriptor::polyhedral_cone({Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()});
  } else if (kind == "circular") {
    const double a = t.number();
    c = ConeDescriptor::circular_cone(a, unit(t.vec3(), 1, "axis"));
  } else {
    throw ParseError(1, "unknown cone '" + kind + "'");
  }
  t.finish();
  return c;
}

std::string text_or_file(const std::string& arg) {
  std::ifstream in(arg);
  if (!in) return arg;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace magcorner::io
