#pragma once

#include <array>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "magcorner/geometry.hpp"
#include "magcorner/planar_models.hpp"

namespace magcorner::energy {

using geometry::Vec3;

/// Magnetic field on the domain: a constant vector or a polynomial of degree
/// at most 2 per component. Planar domains use fields along e3.
struct FieldSpec {
  enum class Kind { Constant, Polynomial };
  /// Monomials of the polynomial form, in this order.
  static constexpr std::array<const char*, 10> kMonomials = {"1", "x", "y", "z", "xx", "xy", "xz", "yy", "yz", "zz"};

  Kind kind = Kind::Constant;
  Vec3 constant = Vec3::Zero();
  std::array<std::array<double, 10>, 3> coeffs{};  ///< per component, over kMonomials
  bool declared_nonvanishing = true;

  static FieldSpec constant_field(const Vec3& B);
  static FieldSpec polynomial(const std::array<std::array<double, 10>, 3>& coeffs);

  Vec3 operator()(const Vec3& x) const;
  bool is_constant() const;
  /// Sampled max of |B| over the domain.
  double norm_bound(const geometry::CornerDomain& domain) const;
};

enum class DichotomyCase { CaseI, CaseII, Undecided };
const char* to_string(DichotomyCase c);

struct Options {
  double tol = 1e-4;
  bool cone3d = false;          ///< allow 3D cone solves
  long cone3d_budget = 200'000; ///< unknowns of one 3D grid
  int family_samples = 64;      ///< generators sampled on circular cone sections
};

struct EnergyReport {
  double E = 0.0;
  double E_star = std::numeric_limits<double>::infinity();
  DichotomyCase dcase = DichotomyCase::Undecided;
  geometry::ConeDescriptor cone;
  Vec3 B = Vec3::Zero();
  std::optional<geometry::SingularChain> witness_chain;  ///< case II
  std::shared_ptr<const EnergyReport> witness_report;    ///< report of the witness tangent structure
  std::optional<models::AGEDescriptor> age;              ///< case I
  std::optional<double> tau_star;
  double tol = 0.0;
  unsigned flags = models::kNone;
  std::string provenance;
  std::vector<std::string> notes;
};

/// E(B, Pi) with its substructure energy and the case of the dichotomy.
EnergyReport local_energy(const Vec3& B, const geometry::ConeDescriptor& cone, const Options& opt = {},
                          const models::Context& ctx = {});

/// E*(B, Pi): the infimum of E over singular chains of length at least 2.
double energy_star(const Vec3& B, const geometry::ConeDescriptor& cone, const Options& opt = {},
                   const models::Context& ctx = {});

/// Same as local_energy; the name follows the theorem it resolves.
EnergyReport dichotomy(const Vec3& B, const geometry::ConeDescriptor& cone, const Options& opt = {},
                       const models::Context& ctx = {});

/// Energy of the tangent structure of a chain.
double chain_energy(const Vec3& B, const geometry::SingularChain& chain, const Options& opt = {},
                    const models::Context& ctx = {});

struct StratumRow {
  geometry::Stratum stratum;
  Vec3 point = Vec3::Zero();  ///< argmin inside the stratum
  EnergyReport report;
  int samples = 0;
};

struct LowestEnergy {
  double value = 0.0;
  Vec3 point = Vec3::Zero();
  int stratum = -1;  ///< index into table
  std::vector<StratumRow> table;
  bool field_vanishes = false;
  std::vector<std::string> notes;
};

/// Lowest local energy over the closed domain with the argmin and the full
/// per-stratum table.
LowestEnergy lowest_local_energy(const FieldSpec& field, const geometry::CornerDomain& domain,
                                 const Options& opt = {}, const models::Context& ctx = {});

/// Finite-difference upper estimate of E(B, Pi) for a supported 3D cone:
/// octant-type polyhedral cones, and circular cones with the field on the axis.
/// Throws UnsupportedGeometry or ResourceLimit.
double cone3d_energy_upper(const Vec3& B, const geometry::ConeDescriptor& cone, const Options& opt = {});

}  // namespace magcorner::energy
