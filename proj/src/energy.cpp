#include "magcorner/energy.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/tools/minima.hpp>

#include "magcorner/errors.hpp"

namespace magcorner::energy {

using geometry::ConeDescriptor;
using geometry::ConeKind;
using geometry::SingularChain;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Guarantees an in-memory band cache for the duration of a top-level call.
class ScopedContext {
 public:
  explicit ScopedContext(const models::Context& ctx) : ctx_(ctx) {
    if (!ctx_.cache) {
      owned_ = std::make_unique<cache::BandCache>("");
      ctx_.cache = owned_.get();
    }
  }
  const models::Context& get() const { return ctx_; }

 private:
  models::Context ctx_;
  std::unique_ptr<cache::BandCache> owned_;
};

EnergyReport compute_local(const Vec3& B, const ConeDescriptor& cone, const Options& opt, const models::Context& ctx);
double compute_star(const Vec3& B, const ConeDescriptor& cone, const Options& opt, const models::Context& ctx);

/// Chains of length >= 2 of the cone, shortest first, with conical families sampled.
std::vector<SingularChain> proper_chains(const ConeDescriptor& cone, const Options& opt) {
  auto all = geometry::enumerate_chain_classes(cone).sampled(opt.family_samples);
  std::vector<SingularChain> out;
  for (auto& c : all)
    if (c.length() >= 2) out.push_back(std::move(c));
  std::stable_sort(out.begin(), out.end(),
                   [](const SingularChain& a, const SingularChain& b) { return a.length() < b.length(); });
  return out;
}

/// Case of the dichotomy. Equality within the margin is resolved by a chain
/// whose tangent structure attains E and is itself in case (i).
void resolve_case(EnergyReport& r, const Options& opt, const models::Context& ctx) {
  const double margin = 3.0 * opt.tol;
  if (r.E < r.E_star - margin) {
    r.dcase = DichotomyCase::CaseI;
    return;
  }
  r.age.reset();
  r.tau_star.reset();
  const auto chains = proper_chains(r.cone, opt);
  std::vector<std::pair<SingularChain, EnergyReport>> attaining;
  for (const auto& chain : chains) {
    EnergyReport sub = compute_local(r.B, chain.tangent, opt, ctx);
    if (std::abs(sub.E - r.E) > margin) continue;
    if (sub.dcase == DichotomyCase::CaseI) {
      r.dcase = DichotomyCase::CaseII;
      r.witness_chain = chain;
      r.witness_report = std::make_shared<EnergyReport>(std::move(sub));
      return;
    }
    attaining.emplace_back(chain, std::move(sub));
  }
  // Longer witnesses: extend an attaining chain by the witness of its own structure.
  for (auto& [chain, sub] : attaining) {
    if (sub.dcase != DichotomyCase::CaseII || !sub.witness_chain) continue;
    SingularChain longer = chain;
    for (const auto& e : sub.witness_chain->entries) longer.entries.push_back(e);
    for (std::size_t k = 1; k < sub.witness_chain->reduced_dims.size(); ++k)
      longer.reduced_dims.push_back(sub.witness_chain->reduced_dims[k]);
    longer.tangent = sub.witness_chain->tangent;
    r.dcase = DichotomyCase::CaseII;
    r.witness_chain = longer;
    r.witness_report = sub.witness_report;
    return;
  }
  r.dcase = DichotomyCase::Undecided;
  r.notes.push_back("E within the margin of E* and no chain attains E strictly below its own E*");
}

models::AGEDescriptor constant_age(const ConeDescriptor& cone) {
  models::AGEDescriptor age;
  age.k = 0;
  age.d = cone.reduced_dimension();
  age.decay_cone = "none";
  age.phase = "1";
  age.energy = 0.0;
  age.profile.distance = {0.0};
  age.profile.envelope = {1.0};
  return age;
}

EnergyReport compute_local(const Vec3& B, const ConeDescriptor& cone, const Options& opt, const models::Context& ctx) {
  EnergyReport r;
  r.cone = cone;
  r.B = B;
  r.tol = opt.tol;
  const double m = B.norm();
  if (m == 0.0) {
    r.E = 0.0;
    r.E_star = 0.0;
    r.dcase = DichotomyCase::Undecided;
    r.age = constant_age(cone);
    r.provenance = "vanishing field";
    r.notes.push_back("B = 0: the constant function is a generalized eigenvector");
    return r;
  }
  const Vec3 b = B / m;
  switch (cone.kind) {
    case ConeKind::FullSpace:
      r.E = m;
      r.E_star = kInf;
      r.age = models::age_descriptor(b, cone, opt.tol, ctx);
      r.provenance = "full space: |B|";
      break;
    case ConeKind::HalfSpace: {
      const auto hs = models::halfspace_energy(B, cone.normal, opt.tol, ctx);
      r.E = hs.value;
      r.E_star = m;
      r.age = hs.age;
      r.flags = hs.band.flags;
      r.provenance = "half-space: |B| sigma(theta)";
      break;
    }
    case ConeKind::Wedge: {
      const Vec3 bw = cone.wedge_frame().transpose() * b;
      const auto we = models::wedge_energy(cone.opening, bw, opt.tol, ctx);
      r.E = m * we.value;
      r.E_star = m * we.e_star;
      r.flags = we.band.flags;
      if (we.age) {
        r.age = *we.age;
        r.age->frame = cone.wedge_frame();
      }
      // The Fourier parameter scales like sqrt|B|.
      if (we.tau_star) r.tau_star = std::sqrt(m) * *we.tau_star;
      r.provenance = "wedge: min over tau of the fiber band";
      break;
    }
    case ConeKind::Cone3D: {
      r.E_star = compute_star(B, cone, opt, ctx);
      r.E = r.E_star;
      r.provenance = "3D cone: E = E* through chains";
      if (opt.cone3d) {
        try {
          const double upper = cone3d_energy_upper(B, cone, opt);
          r.notes.push_back("3D finite-difference estimate " + std::to_string(upper));
          if (upper < r.E_star - opt.tol) {
            r.E = upper;
            r.provenance = "3D cone: finite-difference estimate below E*";
            models::AGEDescriptor age;
            age.k = 3;
            age.d = 3;
            age.decay_cone = "the cone";
            age.phase = "1";
            age.energy = upper / m;
            r.age = age;
          }
        } catch (const UnsupportedGeometry& e) {
          r.notes.push_back(std::string("3D solve skipped: ") + e.what());
        }
      }
      break;
    }
  }
  resolve_case(r, opt, ctx);
  return r;
}

double compute_star(const Vec3& B, const ConeDescriptor& cone, const Options& opt, const models::Context& ctx) {
  const double m = B.norm();
  if (m == 0.0) return 0.0;
  switch (cone.kind) {
    case ConeKind::FullSpace:
      return kInf;
    case ConeKind::HalfSpace:
      return m;
    case ConeKind::Wedge: {
      const auto [tp, tm] = models::wedge_face_angles(cone.opening, cone.wedge_frame().transpose() * (B / m));
      return m * models::sigma(std::min(tp, tm), opt.tol, ctx).value;
    }
    case ConeKind::Cone3D:
      break;
  }
  // Chains of length 2 suffice for 3D cones.
  double best = kInf;
  const auto classes = geometry::enumerate_chain_classes(cone);
  for (const auto& c : classes.classes)
    if (c.length() == 2) best = std::min(best, compute_local(B, c.tangent, opt, ctx).E);
  for (const auto& fam : classes.families) {
    const int n = opt.family_samples;
    auto f = [&](double phi) { return compute_local(B, fam.sample(phi).tangent, opt, ctx).E; };
    std::vector<double> vals(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) vals[static_cast<std::size_t>(k)] = f(2 * M_PI * k / n);
    const auto it = std::min_element(vals.begin(), vals.end());
    const double phi0 = 2 * M_PI * static_cast<double>(it - vals.begin()) / n;
    best = std::min(best, *it);
    // Local refinement around the sampled minimum.
    std::uintmax_t iters = 20;
    const double h = 2 * M_PI / n;
    const auto ref = boost::math::tools::brent_find_minima(f, phi0 - h, phi0 + h, 12, iters);
    best = std::min(best, ref.second);
  }
  return best;
}

Vec3 planar_field(const FieldSpec& field, const geometry::CornerDomain& domain, const Vec3& x) {
  const Vec3 B = field(x);
  if (domain.dimension == 2 && (std::abs(B.x()) > 0.0 || std::abs(B.y()) > 0.0))
    throw InvalidDomain("planar domains need a field along e3");
  return B;
}

}  // namespace

// ---------------------------------------------------------------- fields

FieldSpec FieldSpec::constant_field(const Vec3& B) {
  FieldSpec f;
  f.kind = Kind::Constant;
  f.constant = B;
  for (int c = 0; c < 3; ++c) f.coeffs[static_cast<std::size_t>(c)][0] = B(c);
  f.declared_nonvanishing = B.norm() > 0.0;
  return f;
}

FieldSpec FieldSpec::polynomial(const std::array<std::array<double, 10>, 3>& coeffs) {
  FieldSpec f;
  f.kind = Kind::Polynomial;
  f.coeffs = coeffs;
  if (f.is_constant()) {
    f.kind = Kind::Constant;
    f.constant = Vec3(coeffs[0][0], coeffs[1][0], coeffs[2][0]);
  }
  return f;
}

bool FieldSpec::is_constant() const {
  if (kind == Kind::Constant) return true;
  for (const auto& c : coeffs)
    for (std::size_t k = 1; k < c.size(); ++k)
      if (c[k] != 0.0) return false;
  return true;
}

Vec3 FieldSpec::operator()(const Vec3& p) const {
  if (kind == Kind::Constant) return constant;
  const double x = p.x(), y = p.y(), z = p.z();
  const std::array<double, 10> mono = {1.0, x, y, z, x * x, x * y, x * z, y * y, y * z, z * z};
  Vec3 out = Vec3::Zero();
  for (int c = 0; c < 3; ++c)
    for (std::size_t k = 0; k < mono.size(); ++k) out(c) += coeffs[static_cast<std::size_t>(c)][k] * mono[k];
  return out;
}

double FieldSpec::norm_bound(const geometry::CornerDomain& domain) const {
  if (kind == Kind::Constant) return constant.norm();
  double best = 0.0;
  for (const auto& s : geometry::stratify(domain))
    for (const auto& x : geometry::sample_points(domain, s, 8)) best = std::max(best, (*this)(x).norm());
  return best;
}

const char* to_string(DichotomyCase c) {
  switch (c) {
    case DichotomyCase::CaseI:
      return "I";
    case DichotomyCase::CaseII:
      return "II";
    case DichotomyCase::Undecided:
      return "undecided";
  }
  return "?";
}

// ---------------------------------------------------------------- local energies

EnergyReport local_energy(const Vec3& B, const ConeDescriptor& cone, const Options& opt, const models::Context& ctx) {
  const ScopedContext sc(ctx);
  return compute_local(B, cone, opt, sc.get());
}

double energy_star(const Vec3& B, const ConeDescriptor& cone, const Options& opt, const models::Context& ctx) {
  const ScopedContext sc(ctx);
  return compute_star(B, cone, opt, sc.get());
}

EnergyReport dichotomy(const Vec3& B, const ConeDescriptor& cone, const Options& opt, const models::Context& ctx) {
  if (B.norm() == 0.0) throw ZeroField();
  return local_energy(B, cone, opt, ctx);
}

double chain_energy(const Vec3& B, const SingularChain& chain, const Options& opt, const models::Context& ctx) {
  return local_energy(B, chain.tangent, opt, ctx).E;
}

// ---------------------------------------------------------------- domains

LowestEnergy lowest_local_energy(const FieldSpec& field, const geometry::CornerDomain& domain, const Options& opt,
                                 const models::Context& ctx) {
  using geometry::Carrier;
  const ScopedContext sc(ctx);
  const models::Context& c = sc.get();
  LowestEnergy out;
  const auto strata = geometry::stratify(domain);

  auto eval = [&](const geometry::Stratum& s, const Vec3& x) {
    const Vec3 B = planar_field(field, domain, x);
    return compute_local(B, geometry::tangent_cone_at(domain, s, x), opt, c);
  };

  for (const auto& s : strata) {
    StratumRow row;
    row.stratum = s;
    const bool curved_edge = s.carrier == Carrier::Edge && domain.dimension == 3 && domain.edges[s.element].closed();
    if (field.is_constant() && domain.is_straight() && !curved_edge) {
      // Straight strata with a constant field carry a constant local energy.
      row.point = geometry::representative_point(domain, s);
      row.report = eval(s, row.point);
      row.samples = 1;
      if (field.constant.norm() == 0.0) out.field_vanishes = true;
    } else {
      const int n = s.carrier == Carrier::Edge ? 32 : s.carrier == Carrier::Vertex ? 1 : 10;
      const auto pts = geometry::sample_points(domain, s, n);
      if (pts.empty()) throw InvalidDomain("stratum " + s.label + " has no sample points");
      std::vector<EnergyReport> reps;
      reps.reserve(pts.size());
      std::size_t best = 0;
      for (std::size_t k = 0; k < pts.size(); ++k) {
        if (field(pts[k]).norm() == 0.0) out.field_vanishes = true;
        reps.push_back(eval(s, pts[k]));
        if (reps[k].E < reps[best].E) best = k;
      }
      row.point = pts[best];
      row.report = reps[best];
      row.samples = static_cast<int>(pts.size());
      // One golden-section pass towards the nearest sample on flat strata.
      const bool flat = s.carrier == Carrier::Interior || (s.carrier == Carrier::Edge && !curved_edge) ||
                        (s.carrier == Carrier::Face && domain.faces[s.element].kind == geometry::FaceKind::Plane);
      if (pts.size() > 1 && flat) {
        std::size_t near = best == 0 ? 1 : 0;
        for (std::size_t k = 0; k < pts.size(); ++k)
          if (k != best && (pts[k] - pts[best]).norm() < (pts[near] - pts[best]).norm()) near = k;
        const Vec3 a = pts[best], d = pts[near] - pts[best];
        auto f = [&](double t) { return eval(s, a + t * d).E; };
        std::uintmax_t iters = 16;
        const double lo = (s.carrier == Carrier::Edge && best > 0 && best + 1 < pts.size()) ? -1.0 : 0.0;
        const auto [t, v] = boost::math::tools::brent_find_minima(f, lo, 1.0, 12, iters);
        if (v < row.report.E) {
          row.point = a + t * d;
          row.report = eval(s, row.point);
        }
      }
    }
    out.table.push_back(std::move(row));
  }

  std::size_t best = 0;
  for (std::size_t k = 0; k < out.table.size(); ++k)
    if (out.table[k].report.E < out.table[best].report.E) best = k;
  out.value = out.table[best].report.E;
  out.point = out.table[best].point;
  out.stratum = static_cast<int>(best);
  if (out.field_vanishes) {
    out.notes.push_back("field vanishes at a sampled point");
    if (!field.declared_nonvanishing) out.value = 0.0;
  }
  return out;
}

}  // namespace magcorner::energy
