#include "magcorner/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "magcorner/errors.hpp"
#include "magcorner/planar_models.hpp"

namespace magcorner::asymptotics {

namespace {

Exponent reduced(int num, int den, bool log_factor = false) {
  const int g = std::gcd(num, den);
  return {num / g, den / g, log_factor};
}

/// 2 - kappa, from lambda(B) = B^2 lambda_{1/B}.
Exponent in_field(const Exponent& e) { return reduced(2 * e.den - e.num, e.den, e.log_factor); }

bool has_conical_vertex(const geometry::CornerDomain& d) { return !d.conical.empty(); }

}  // namespace

const char* to_string(DomainClass c) {
  switch (c) {
    case DomainClass::GeneralCorner:
      return "general-corner";
    case DomainClass::Polyhedral:
      return "polyhedral";
    case DomainClass::StraightConstant:
      return "straight-polyhedron-constant-B";
    case DomainClass::CornerConcentration:
      return "corner-concentration";
    case DomainClass::VanishingField:
      return "vanishing-B";
  }
  return "?";
}

const char* to_string(Smoothness s) { return s == Smoothness::W2 ? "W2" : "W3"; }

std::string Exponent::text() const {
  std::string t = den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
  return log_factor ? t + " |log|" : t;
}

ExponentPair exponents(DomainClass cls, Smoothness smooth) {
  const bool w3 = smooth == Smoothness::W3;
  switch (cls) {
    case DomainClass::GeneralCorner:
      return {{11, 10}, w3 ? Exponent{9, 8} : Exponent{11, 10}};
    case DomainClass::Polyhedral:
      return {{5, 4}, w3 ? Exponent{4, 3} : Exponent{5, 4}};
    case DomainClass::StraightConstant:
      return {{5, 4}, {2, 1}};
    case DomainClass::CornerConcentration:
      return {{5, 4}, {3, 2, true}};
    case DomainClass::VanishingField:
      return {{5, 4}, {4, 3}};
  }
  return {};
}

ExponentPair large_field_exponents(DomainClass cls, Smoothness smooth) {
  const auto e = exponents(cls, smooth);
  return {in_field(e.lower), in_field(e.upper)};
}

DomainClass classify(const geometry::CornerDomain& domain, const energy::FieldSpec& field,
                     const energy::LowestEnergy& lowest) {
  if (lowest.field_vanishes || lowest.value == 0.0) return DomainClass::VanishingField;
  if (domain.is_straight() && field.is_constant()) return DomainClass::StraightConstant;
  if (lowest.stratum >= 0) {
    const auto& row = lowest.table[static_cast<std::size_t>(lowest.stratum)];
    if (row.stratum.carrier == geometry::Carrier::Vertex && row.report.dcase == energy::DichotomyCase::CaseI)
      return DomainClass::CornerConcentration;
  }
  return has_conical_vertex(domain) ? DomainClass::GeneralCorner : DomainClass::Polyhedral;
}

std::optional<std::pair<double, double>> AsymptoticBound::interval() const {
  if (!c_minus || !c_plus) return std::nullopt;
  auto term = [&](const Exponent& e, double c) {
    const double t = c * std::pow(scale, e.value());
    return e.log_factor ? t * std::abs(std::log(scale)) : t;
  };
  return std::make_pair(central - term(lower, *c_minus), central + term(upper, *c_plus));
}

AsymptoticBound lambda_bounds(const geometry::CornerDomain& domain, const energy::FieldSpec& field, double h,
                              Smoothness smooth, const energy::LowestEnergy& lowest,
                              const oracle::StudyTable* study) {
  if (!(h > 0.0)) throw InvalidDomain("h must be positive");
  AsymptoticBound b;
  b.scale = h;
  b.E = lowest.value;
  b.central = h * lowest.value;
  b.cls = classify(domain, field, lowest);
  b.smooth = smooth;
  // Corner concentration keeps the lower exponent of its geometry class.
  auto pair = exponents(b.cls, smooth);
  if (b.cls == DomainClass::CornerConcentration && has_conical_vertex(domain)) pair.lower = {11, 10};
  if (b.cls == DomainClass::VanishingField && has_conical_vertex(domain)) pair.lower = {11, 10};
  b.lower = pair.lower;
  b.upper = pair.upper;
  b.constants = std::string("C(Omega) (1 + ||A||^2_{") + (smooth == Smoothness::W2 ? "W^{2,inf}" : "W^{3,inf}") +
                "}), not computed";
  if (study && !study->rows.empty()) {
    double cm = 0.0, cp = 0.0;
    for (const auto& row : study->rows) {
      const double gap = row.lambda - row.h * study->E;
      auto scaled = [&](const Exponent& e) {
        const double p = std::pow(row.h, e.value());
        return e.log_factor ? p * std::abs(std::log(row.h)) : p;
      };
      if (gap < 0.0) cm = std::max(cm, -gap / scaled(b.lower));
      if (gap > 0.0) cp = std::max(cp, gap / scaled(b.upper));
    }
    b.c_minus = cm;
    b.c_plus = cp;
    b.constants += "; empirical constants fitted on the oracle runs";
  }
  return b;
}

AsymptoticBound large_field_bounds(const geometry::CornerDomain& domain, const energy::FieldSpec& field,
                                   double B_scale, Smoothness smooth, const energy::LowestEnergy& lowest) {
  if (!(B_scale > 0.0)) throw InvalidDomain("field scale must be positive");
  AsymptoticBound b = lambda_bounds(domain, field, 1.0 / B_scale, smooth, lowest);
  b.scale = B_scale;
  b.large_field = true;
  b.central = B_scale * lowest.value;
  b.lower = in_field(b.lower);
  b.upper = in_field(b.upper);
  return b;
}

CornerConcentration corner_concentration(const geometry::CornerDomain& domain, const energy::FieldSpec& field,
                                         const energy::Options& opt, const models::Context& ctx, int per_corner) {
  using geometry::Carrier;
  const auto lowest = energy::lowest_local_energy(field, domain, opt, ctx);
  CornerConcentration out;
  out.floor = std::numeric_limits<double>::infinity();
  for (const auto& row : lowest.table)
    if (row.stratum.carrier != Carrier::Vertex) out.floor = std::min(out.floor, row.report.E);

  for (const auto& row : lowest.table) {
    if (row.stratum.carrier != Carrier::Vertex) continue;
    const double b = field(row.point).norm();
    if (b == 0.0) continue;
    std::vector<double> levels;
    if (domain.dimension == 2) {
      const double alpha = geometry::polygon_angle(domain, row.stratum.element);
      for (double e : models::sector_eigenvalues(alpha, per_corner, ctx)) levels.push_back(b * e);
    } else {
      if (!opt.cone3d) throw ResourceLimit("corner concentration in 3D needs cone solves (enable cone3d)");
      try {
        levels.push_back(energy::cone3d_energy_upper(field(row.point), row.report.cone, opt));
      } catch (const UnsupportedGeometry&) {
        continue;
      }
    }
    for (std::size_t k = 0; k < levels.size(); ++k)
      if (levels[k] < out.floor - opt.tol)
        out.levels.push_back({row.stratum.element, row.stratum.label, static_cast<int>(k) + 1, levels[k]});
  }
  std::stable_sort(out.levels.begin(), out.levels.end(),
                   [](const CornerLevel& a, const CornerLevel& b) { return a.energy < b.energy; });
  out.statement = "|lambda_h^(k) - h E^(k)| <= C h^{3/2} for k = 1.." + std::to_string(out.levels.size());
  return out;
}

}  // namespace magcorner::asymptotics
