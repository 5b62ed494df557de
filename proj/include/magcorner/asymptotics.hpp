#pragma once

#include <optional>
#include <string>
#include <vector>

#include "magcorner/energy.hpp"
#include "magcorner/oracle.hpp"

namespace magcorner::asymptotics {

enum class DomainClass { GeneralCorner, Polyhedral, StraightConstant, CornerConcentration, VanishingField };
enum class Smoothness { W2, W3 };

const char* to_string(DomainClass c);
const char* to_string(Smoothness s);

/// Remainder exponent num/den, optionally with a |log| factor.
struct Exponent {
  int num = 0;
  int den = 1;
  bool log_factor = false;

  double value() const { return static_cast<double>(num) / den; }
  std::string text() const;
  bool operator==(const Exponent& o) const {
    return num * o.den == o.num * den && log_factor == o.log_factor;
  }
};

struct ExponentPair {
  Exponent lower;
  Exponent upper;
};

/// Remainder exponents in h of the eigenvalue bounds for a class.
ExponentPair exponents(DomainClass cls, Smoothness smooth);
/// Remainder exponents in B of the large-field bounds: 2 - kappa.
ExponentPair large_field_exponents(DomainClass cls, Smoothness smooth);

/// Sharpest applicable class. Corner concentration needs the argmin of the
/// lowest energy at a vertex in case (i).
DomainClass classify(const geometry::CornerDomain& domain, const energy::FieldSpec& field,
                     const energy::LowestEnergy& lowest);

struct AsymptoticBound {
  double scale = 0.0;    ///< h, or the field scale B for large-field bounds
  bool large_field = false;
  double E = 0.0;
  double central = 0.0;  ///< h E, or B E
  Exponent lower;
  Exponent upper;
  DomainClass cls = DomainClass::GeneralCorner;
  Smoothness smooth = Smoothness::W2;
  std::string constants;  ///< symbolic dependence of C-+
  std::optional<double> c_minus, c_plus;  ///< empirical, from oracle data

  /// Interval with the empirical constants, when both are known.
  std::optional<std::pair<double, double>> interval() const;
};

AsymptoticBound lambda_bounds(const geometry::CornerDomain& domain, const energy::FieldSpec& field, double h,
                              Smoothness smooth, const energy::LowestEnergy& lowest,
                              const oracle::StudyTable* study = nullptr);

/// lambda(B field, Omega) ~ B E with remainders in powers of B (h = 1 / B).
AsymptoticBound large_field_bounds(const geometry::CornerDomain& domain, const energy::FieldSpec& field,
                                   double B_scale, Smoothness smooth, const energy::LowestEnergy& lowest);

struct CornerLevel {
  int vertex = -1;
  std::string label;
  int index = 0;  ///< k-th eigenvalue of this corner's model
  double energy = 0.0;
};

struct CornerConcentration {
  double floor = 0.0;  ///< lowest local energy off the vertices
  std::vector<CornerLevel> levels;  ///< ascending, with multiplicity
  Exponent remainder{3, 2, false};
  std::string statement;
};

/// Corner model eigenvalues below the off-corner floor. Planar corners use
/// sector solves; 3D vertices need cone solves enabled in `opt`.
CornerConcentration corner_concentration(const geometry::CornerDomain& domain, const energy::FieldSpec& field,
                                         const energy::Options& opt = {}, const models::Context& ctx = {},
                                         int per_corner = 4);

}  // namespace magcorner::asymptotics
