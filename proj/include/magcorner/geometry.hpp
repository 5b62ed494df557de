#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace magcorner::geometry {

using Vec3 = Eigen::Vector3d;

// ---------------------------------------------------------------- cones

enum class ConeKind { FullSpace, HalfSpace, Wedge, Cone3D };
enum class SectionKind { None, Polygon, Circle };

const char* to_string(ConeKind kind);

/// Tangent model cone. Planar domains are embedded as Omega x R with the
/// planar field along e3, so a polygon corner is a Wedge whose edge is e3.
struct ConeDescriptor {
  ConeKind kind = ConeKind::FullSpace;
  int ambient_dimension = 3;
  Vec3 base = Vec3::Zero();

  Vec3 normal = Vec3::Zero();  ///< HalfSpace: outward unit normal

  double opening = 0.0;        ///< Wedge: dihedral opening alpha
  Vec3 edge = Vec3::Zero();    ///< Wedge: unit edge direction
  Vec3 bisector = Vec3::Zero();///< Wedge: unit interior bisector, orthogonal to edge

  SectionKind section = SectionKind::None;
  std::vector<Vec3> rays;          ///< Cone3D polygon: unit edge rays, cyclic order
  std::vector<Vec3> face_normals;  ///< Cone3D polygon: outward normal of the face between rays k and k+1
  std::vector<double> edge_openings;  ///< Cone3D polygon: dihedral opening along ray k
  double aperture = 0.0;           ///< Cone3D circle: half-aperture
  Vec3 axis = Vec3::Zero();        ///< Cone3D circle: unit axis pointing into the cone

  int reduced_dimension() const;

  /// Right-handed wedge frame (edge, bisector, edge x bisector) as columns.
  Eigen::Matrix3d wedge_frame() const;
  /// Outward normals of the two wedge faces; first is at +alpha/2 from the bisector.
  std::pair<Vec3, Vec3> wedge_face_normals() const;

  static ConeDescriptor full_space(const Vec3& base = Vec3::Zero());
  static ConeDescriptor half_space(const Vec3& normal, const Vec3& base = Vec3::Zero());
  static ConeDescriptor wedge(double opening, const Vec3& edge, const Vec3& bisector, const Vec3& base = Vec3::Zero());
  /// Wedge bounded by two faces with given outward normals that meet along `edge`.
  static ConeDescriptor wedge_from_faces(const Vec3& edge, const Vec3& n_a, const Vec3& d_a, const Vec3& n_b,
                                         const Vec3& d_b, const Vec3& base = Vec3::Zero());
  /// Rays in cyclic order. Face normals default to the outward cross products.
  static ConeDescriptor polyhedral_cone(const std::vector<Vec3>& rays, const Vec3& base = Vec3::Zero(),
                                        const std::vector<Vec3>& face_normals = {});
  static ConeDescriptor circular_cone(double aperture, const Vec3& axis, const Vec3& base = Vec3::Zero());

  /// Equality up to the base point, with an absolute tolerance on all data.
  bool same_shape(const ConeDescriptor& other, double tol = 1e-10) const;
};

/// Unoriented angle in [0, pi/2] between B and the boundary plane of a half-space.
double field_face_angle(const Vec3& B, const ConeDescriptor& half_space);

/// asin(s) for s in [0, 1], snapping rounding noise onto the endpoints 0 and pi/2.
double angle_from_sine(double s);

// ---------------------------------------------------------------- domains

enum class FaceKind { Plane, Sphere, Cone };

struct Vertex {
  std::string id;
  Vec3 p = Vec3::Zero();
};

struct Face {
  std::string id;
  FaceKind kind = FaceKind::Plane;
  Vec3 normal = Vec3::Zero();  ///< Plane: outward unit normal
  std::vector<int> loop;       ///< Plane: vertex indices, counter-clockwise seen from outside
  Vec3 center = Vec3::Zero();  ///< Sphere: center; Cone: apex; Plane without loop: a point
  double radius = 0.0;         ///< Sphere
  Vec3 axis = Vec3::Zero();    ///< Cone: unit axis into the solid
  double aperture = 0.0;       ///< Cone: half-aperture
  bool inward = false;         ///< Sphere: domain lies outside the ball

  /// Outward unit normal at a point of the face.
  Vec3 normal_at(const Vec3& x) const;
};

struct Edge {
  std::string id;
  int v0 = -1, v1 = -1;        ///< straight edge endpoints; -1 for a closed curve
  int face_a = -1, face_b = -1;
  double opening = 0.0;
  Vec3 direction = Vec3::Zero();  ///< straight edges: unit v0 -> v1
  std::vector<Vec3> samples;      ///< closed curves: sample points, cyclic
  bool closed() const { return v0 < 0; }
};

struct ConicalVertex {
  int vertex = -1;
  double aperture = 0.0;
  Vec3 axis = Vec3::Zero();
};

/// Straight polygon (dimension 2, vertex loop counter-clockwise) or straight
/// polyhedron (dimension 3) with optional circular-cone vertices. Planar data
/// uses z = 0.
struct CornerDomain {
  int dimension = 3;
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::vector<Face> faces;
  std::vector<ConicalVertex> conical;
  std::vector<int> polygon;  ///< dimension 2: vertex loop

  int vertex_index(const std::string& id) const;
  int face_index(const std::string& id) const;
  const ConicalVertex* conical_at(int vertex) const;
  /// True when every face is a plane and no vertex is conical.
  bool is_straight() const;

  /// Check every documented invariant; throws ValidationError naming the first failure.
  void validate() const;
};

/// Opening of the dihedral angle at an edge point, measured through the
/// interior: d_a, d_b are the in-face directions orthogonal to the edge.
double dihedral_opening(const Vec3& n_a, const Vec3& d_a, const Vec3& d_b);

/// Dihedral opening of an edge from its two faces; closed edges use their
/// first sample. Face and vertex references must be valid.
double edge_opening(const CornerDomain& domain, const Edge& edge);

/// Interior (counter-clockwise) angle of a planar polygon at vertex k.
double polygon_angle(const CornerDomain& polygon, int k);

// ---------------------------------------------------------------- strata

enum class Carrier { Interior, Face, Edge, Vertex };

struct Stratum {
  int id = 0;
  int d0 = 0;
  Carrier carrier = Carrier::Interior;
  int element = -1;  ///< index into faces / edges / vertices (planar: sides are edges, corners vertices)
  std::string label;
};

/// One interior stratum, then one per face, edge and vertex.
std::vector<Stratum> stratify(const CornerDomain& domain);

/// Points of the stratum for sampling; `n` controls the density per direction.
std::vector<Vec3> sample_points(const CornerDomain& domain, const Stratum& stratum, int n);

/// A representative point of the stratum.
Vec3 representative_point(const CornerDomain& domain, const Stratum& stratum);

ConeDescriptor tangent_cone_at(const CornerDomain& domain, const Stratum& stratum, const Vec3& point);

// ---------------------------------------------------------------- chains

enum class SelectorKind { SectionInterior, SectionSide, SectionVertex, SectionEnd, ConicalGenerator };

/// Symbolic position inside the section of the current tangent structure.
struct Selector {
  SelectorKind kind = SelectorKind::SectionInterior;
  int index = 0;       ///< side / vertex number, or +-1 for wedge ends
  double param = 0.0;  ///< ConicalGenerator angle

  bool operator==(const Selector& o) const {
    return kind == o.kind && index == o.index && param == o.param;
  }
};

struct SingularChain {
  Vec3 base = Vec3::Zero();
  std::vector<Selector> entries;   ///< x_1 .. x_p
  ConeDescriptor tangent;          ///< Pi_X
  std::vector<int> reduced_dims;   ///< d_0 .. d_p

  std::size_t length() const { return entries.size() + 1; }
};

/// Tangent structure reached by following `entries` from `cone`.
ConeDescriptor follow_chain(const ConeDescriptor& cone, const std::vector<Selector>& entries);

/// Every chain of the tree rooted at the cone of x0, depth-first.
/// Circular sections contribute `family_samples` generators.
std::vector<SingularChain> enumerate_chains(const ConeDescriptor& root, int family_samples = 64);

struct ChainFamily {
  std::string label;
  int default_samples = 64;
  std::function<SingularChain(double)> sample;  ///< parameter in [0, 2 pi)
};

struct ChainClasses {
  std::vector<SingularChain> classes;  ///< shortest representative per class
  std::vector<ChainFamily> families;   ///< continuous families (conical vertices)

  /// Discrete classes followed by `n` samples of each family.
  std::vector<SingularChain> sampled(int n) const;
};

ChainClasses enumerate_chain_classes(const ConeDescriptor& root);
ChainClasses enumerate_chain_classes(const CornerDomain& domain, const Stratum& stratum, const Vec3& point);

bool chain_leq(const SingularChain& x, const SingularChain& y);

/// Upper bound of the chain distance: base-point distance plus the defect of a
/// canonical linear map between the tangent structures. +infinity when no
/// supported map exists.
double chain_distance_upper(const SingularChain& x, const SingularChain& y);

}  // namespace magcorner::geometry
