// Command-line front end. Every command writes JSON lines to stdout or --out.

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "magcorner/asymptotics.hpp"
#include "magcorner/cache.hpp"
#include "magcorner/degennes.hpp"
#include "magcorner/errors.hpp"
#include "magcorner/io.hpp"

using nlohmann::json;
using namespace magcorner;

namespace {

json vec(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

json profile_json(const models::ModeProfile& p) {
  if (p.empty()) return nullptr;
  return {{"decay_rate", p.decay_rate},
          {"decay_constant", p.decay_constant},
          {"certified", p.certified},
          {"distance", p.distance},
          {"envelope", p.envelope}};
}

json flags_json(unsigned f) {
  json out = json::array();
  if (f & models::kLowConfidence) out.push_back("low-confidence");
  if (f & models::kEssentialCollision) out.push_back("essential-collision");
  if (f & models::kClamped) out.push_back("clamped");
  return out;
}

json band_json(const models::BandSample& b) {
  return {{"model", b.model},       {"params", b.params},   {"value", b.value},
          {"raw", b.raw},           {"error_estimate", b.error_estimate},
          {"threshold", b.threshold}, {"flags", flags_json(b.flags)},
          {"radius", b.radius},     {"step", b.step},       {"scheme", b.scheme},
          {"mode", profile_json(b.mode)}};
}

json age_json(const std::optional<models::AGEDescriptor>& a) {
  if (!a) return nullptr;
  json frame = json::array();
  for (int c = 0; c < 3; ++c) frame.push_back(vec(a->frame.col(c)));
  return {{"k", a->k},
          {"d", a->d},
          {"decay_cone", a->decay_cone},
          {"phase", a->phase},
          {"frame", frame},
          {"tau_star", a->tau_star ? json(*a->tau_star) : json(nullptr)},
          {"energy", a->energy},
          {"profile", profile_json(a->profile)}};
}

json cone_json(const geometry::ConeDescriptor& c) {
  json j = {{"kind", geometry::to_string(c.kind)}, {"base", vec(c.base)}, {"reduced_dimension", c.reduced_dimension()}};
  switch (c.kind) {
    case geometry::ConeKind::HalfSpace:
      j["normal"] = vec(c.normal);
      break;
    case geometry::ConeKind::Wedge:
      j["opening"] = c.opening;
      j["edge"] = vec(c.edge);
      j["bisector"] = vec(c.bisector);
      break;
    case geometry::ConeKind::Cone3D:
      if (c.section == geometry::SectionKind::Circle) {
        j["aperture"] = c.aperture;
        j["axis"] = vec(c.axis);
      } else {
        json rays = json::array();
        for (const auto& r : c.rays) rays.push_back(vec(r));
        j["rays"] = rays;
        j["edge_openings"] = c.edge_openings;
      }
      break;
    default:
      break;
  }
  return j;
}

std::string selector_text(const geometry::Selector& s) {
  using geometry::SelectorKind;
  switch (s.kind) {
    case SelectorKind::SectionInterior:
      return "interior";
    case SelectorKind::SectionSide:
      return "side " + std::to_string(s.index);
    case SelectorKind::SectionVertex:
      return "vertex " + std::to_string(s.index);
    case SelectorKind::SectionEnd:
      return s.index > 0 ? "end +" : "end -";
    case SelectorKind::ConicalGenerator: {
      std::ostringstream o;
      o.precision(17);
      o << "generator " << s.param;
      return o.str();
    }
  }
  return "?";
}

json chain_json(const geometry::SingularChain& c) {
  json entries = json::array();
  for (const auto& s : c.entries) entries.push_back(selector_text(s));
  return {{"length", c.length()}, {"entries", entries}, {"tangent", cone_json(c.tangent)}, {"reduced_dims", c.reduced_dims}};
}

json report_json(const energy::EnergyReport& r) {
  json j = {{"E", r.E},
            {"E_star", std::isfinite(r.E_star) ? json(r.E_star) : json(nullptr)},
            {"case", energy::to_string(r.dcase)},
            {"B", vec(r.B)},
            {"cone", cone_json(r.cone)},
            {"tol", r.tol},
            {"flags", flags_json(r.flags)},
            {"provenance", r.provenance},
            {"notes", r.notes},
            {"tau_star", r.tau_star ? json(*r.tau_star) : json(nullptr)},
            {"age", age_json(r.age)}};
  j["witness_chain"] = r.witness_chain ? chain_json(*r.witness_chain) : json(nullptr);
  j["witness_report"] = r.witness_report ? report_json(*r.witness_report) : json(nullptr);
  return j;
}

json exponent_json(const asymptotics::Exponent& e) {
  return {{"num", e.num}, {"den", e.den}, {"log", e.log_factor}, {"text", e.text()}, {"value", e.value()}};
}

json bound_json(const asymptotics::AsymptoticBound& b) {
  json j = {{"scale", b.scale},
            {"large_field", b.large_field},
            {"E", b.E},
            {"central", b.central},
            {"class", asymptotics::to_string(b.cls)},
            {"smoothness", asymptotics::to_string(b.smooth)},
            {"lower_exponent", exponent_json(b.lower)},
            {"upper_exponent", exponent_json(b.upper)},
            {"constants", b.constants},
            {"c_minus", b.c_minus ? json(*b.c_minus) : json(nullptr)},
            {"c_plus", b.c_plus ? json(*b.c_plus) : json(nullptr)}};
  if (auto iv = b.interval()) j["interval"] = {iv->first, iv->second};
  return j;
}

json lowest_json(const energy::LowestEnergy& lo) {
  return {{"E", lo.value},
          {"point", vec(lo.point)},
          {"stratum", lo.stratum >= 0 ? json(lo.table[lo.stratum].stratum.label) : json(nullptr)},
          {"field_vanishes", lo.field_vanishes},
          {"notes", lo.notes}};
}

/// Destination of the JSON lines.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw IoError("cannot write " + path);
    }
  }
  void emit(const std::string& command, json j) {
    j["command"] = command;
    (file_ ? *file_ : std::cout) << j.dump() << '\n';
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

struct Common {
  double tol = 1e-4;
  std::string cache_path;
  std::string out_path;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--tol", c.tol, "solver tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--cache", c.cache_path, "band cache file");
  cmd->add_option("--out", c.out_path, "write JSON lines here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lowest local energies of magnetic Neumann Laplacians on corner domains"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");  // frees -h for the semiclassical parameter
  Common common;

  double tau = 0.0, theta = 0.0, alpha = 0.0, h = 0.0, step = 0.0, B_scale = 0.0;
  std::vector<double> wedge_field;
  std::vector<double> h_list;
  std::string domain_path, field_text, cone_text, gauge_text, smooth = "w2", sector_gauge = "symmetric";
  bool cone3d = false;
  long budget = energy::Options{}.cone3d_budget;
  std::optional<double> study_E;
  int per_corner = 4;

  auto* c_theta0 = app.add_subcommand("theta0", "Theta0 and tau0 of the de Gennes family");
  auto* c_mu = app.add_subcommand("mu", "de Gennes eigenvalue mu(tau)");
  c_mu->add_option("--tau", tau)->required();
  auto* c_sigma = app.add_subcommand("sigma", "half-space energy sigma(theta)");
  c_sigma->add_option("--theta", theta)->required()->check(CLI::Range(0.0, M_PI_2));
  auto* c_sector = app.add_subcommand("sector", "unit-field sector energy E(1, S_alpha)");
  c_sector->add_option("--alpha", alpha)->required()->check(CLI::Range(0.0, 2 * M_PI));
  c_sector->add_option("--gauge", sector_gauge)->check(CLI::IsMember({"symmetric", "landau"}));
  auto* c_wedge = app.add_subcommand("wedge", "wedge energy E(B, W_alpha), field in the wedge frame");
  c_wedge->add_option("--alpha", alpha)->required();
  c_wedge->add_option("--field", wedge_field)->required()->expected(3);
  auto* c_energy = app.add_subcommand("energy", "lowest local energy of a domain");
  auto* c_estar = app.add_subcommand("estar", "per-stratum E and E* of a domain");
  auto* c_bounds = app.add_subcommand("bounds", "two-sided eigenvalue bounds");
  auto* c_corners = app.add_subcommand("corners", "corner levels below the off-corner energy");
  for (auto* c : {c_energy, c_estar, c_bounds, c_corners}) {
    c->add_option("--domain", domain_path)->required();
    c->add_option("--field", field_text, "field text or file")->required();
    c->add_flag("--cone3d", cone3d, "enable 3D cone solves");
    c->add_option("--budget", budget, "unknowns of one 3D cone grid")->check(CLI::PositiveNumber);
  }
  c_bounds->add_option("--h", h)->check(CLI::PositiveNumber);
  c_bounds->add_option("--B", B_scale, "large-field scale instead of h")->check(CLI::PositiveNumber);
  c_bounds->add_option("--smooth", smooth)->check(CLI::IsMember({"w2", "w3"}));
  c_corners->add_option("--per-corner", per_corner)->check(CLI::PositiveNumber);
  auto* c_dich = app.add_subcommand("dichotomy", "local energy and dichotomy case of a tangent cone");
  c_dich->add_option("--cone", cone_text, "cone spec")->required();
  c_dich->add_option("--field", field_text)->required();
  c_dich->add_flag("--cone3d", cone3d);
  c_dich->add_option("--budget", budget)->check(CLI::PositiveNumber);
  auto* c_oracle = app.add_subcommand("oracle", "direct eigensolve on a polygon");
  c_oracle->add_option("--polygon", domain_path)->required();
  c_oracle->add_option("--gauge", gauge_text)->required();
  c_oracle->add_option("--field", field_text, "declared field, checked against the gauge curl");
  c_oracle->add_option("--h", h)->required()->check(CLI::PositiveNumber);
  c_oracle->add_option("--step", step)->check(CLI::NonNegativeNumber);
  auto* c_study = app.add_subcommand("study", "oracle convergence study against h E");
  c_study->add_option("--polygon", domain_path)->required();
  c_study->add_option("--field", field_text)->required();
  c_study->add_option("--hs", h_list)->required()->delimiter(',');
  c_study->add_option("--E", study_E, "compare against this E instead of the computed energy");
  c_study->add_option("--smooth", smooth)->check(CLI::IsMember({"w2", "w3"}));

  for (auto* c : app.get_subcommands({})) add_common(c, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    Output out(common.out_path);
    std::unique_ptr<cache::BandCache> cache;
    if (!common.cache_path.empty()) {
      cache = std::make_unique<cache::BandCache>(common.cache_path);
      for (const auto& w : cache->warnings()) std::cerr << "warning: " << w << '\n';
    }
    models::Context ctx;
    ctx.cache = cache.get();
    energy::Options opt;
    opt.tol = common.tol;
    opt.cone3d = cone3d;
    opt.cone3d_budget = budget;
    const auto smoothness = smooth == "w3" ? asymptotics::Smoothness::W3 : asymptotics::Smoothness::W2;
    // The 1D solvers default to a tighter tolerance than the 2D models.
    const bool tol_given = app.get_subcommands().front()->get_option("--tol")->count() > 0;
    const double tol_1d = tol_given ? common.tol : 1e-8;

    if (*c_theta0) {
      const auto t = degennes::theta0(tol_1d);
      out.emit("theta0", {{"Theta0", t.theta0}, {"tau0", t.tau0}, {"error_estimate", t.error_estimate}});
    } else if (*c_mu) {
      const auto s = degennes::mu(tau, tol_1d);
      out.emit("mu", {{"tau", s.tau},
                      {"mu", s.mu},
                      {"error_estimate", s.error_estimate},
                      {"fh_moment", degennes::fh_moment(s)},
                      {"decay_rate", s.decay_rate},
                      {"decay_constant", s.decay_constant},
                      {"step", s.step},
                      {"length", s.length}});
    } else if (*c_sigma) {
      out.emit("sigma", {{"theta", theta}, {"band", band_json(models::sigma(theta, common.tol, ctx))}});
    } else if (*c_sector) {
      const auto g = sector_gauge == "landau" ? models::SectorGauge::Landau : models::SectorGauge::Symmetric;
      out.emit("sector", {{"alpha", alpha}, {"gauge", sector_gauge}, {"band", band_json(models::sector_energy(alpha, common.tol, ctx, g))}});
    } else if (*c_wedge) {
      const Eigen::Vector3d B(wedge_field[0], wedge_field[1], wedge_field[2]);
      if (B.norm() == 0.0) throw ZeroField();
      const auto w = models::wedge_energy(alpha, B.normalized(), common.tol, ctx);
      const double s = B.norm();
      out.emit("wedge", {{"alpha", alpha},
                         {"B", vec(B)},
                         {"E", s * w.value},
                         {"raw", s * w.raw},
                         {"E_star", s * w.e_star},
                         {"theta_plus", w.theta_plus},
                         {"theta_minus", w.theta_minus},
                         {"tau_star", w.tau_star ? json(*w.tau_star * std::sqrt(s)) : json(nullptr)},
                         {"case", w.value < w.e_star - 3 * common.tol ? "I" : "undecided"},
                         {"age", age_json(w.age)},
                         {"band", band_json(w.band)}});
    } else if (*c_dich) {
      const auto cone = io::parse_cone(io::text_or_file(cone_text));
      const auto field = io::parse_field(io::text_or_file(field_text));
      out.emit("dichotomy", report_json(energy::dichotomy(field(cone.base), cone, opt, ctx)));
    } else if (*c_energy || *c_estar || *c_bounds || *c_corners) {
      const auto domain = io::load_domain(domain_path);
      const auto field = io::parse_field(io::text_or_file(field_text));
      if (*c_corners) {
        const auto cc = asymptotics::corner_concentration(domain, field, opt, ctx, per_corner);
        for (const auto& l : cc.levels)
          out.emit("corners", {{"vertex", l.label}, {"index", l.index}, {"energy", l.energy}});
        out.emit("corners", {{"floor", cc.floor},
                             {"count", cc.levels.size()},
                             {"remainder", exponent_json(cc.remainder)},
                             {"statement", cc.statement}});
      } else {
        const auto lo = energy::lowest_local_energy(field, domain, opt, ctx);
        const std::string name = *c_energy ? "energy" : *c_estar ? "estar" : "bounds";
        if (!*c_bounds) {
          for (const auto& row : lo.table) {
            json j = {{"stratum", row.stratum.label}, {"point", vec(row.point)}, {"samples", row.samples}};
            if (*c_estar) {
              j["E"] = row.report.E;
              j["E_star"] = std::isfinite(row.report.E_star) ? json(row.report.E_star) : json(nullptr);
              j["case"] = energy::to_string(row.report.dcase);
            } else {
              j["report"] = report_json(row.report);
            }
            out.emit(name, j);
          }
        }
        json summary = lowest_json(lo);
        if (*c_estar) {
          double es = std::numeric_limits<double>::infinity();
          for (const auto& row : lo.table) es = std::min(es, row.report.E_star);
          summary["E_star_min"] = std::isfinite(es) ? json(es) : json(nullptr);
        }
        if (*c_bounds) {
          if ((h > 0) == (B_scale > 0)) throw InvalidDomain("bounds needs exactly one of --h and --B");
          summary["bounds"] = bound_json(h > 0 ? asymptotics::lambda_bounds(domain, field, h, smoothness, lo)
                                               : asymptotics::large_field_bounds(domain, field, B_scale, smoothness, lo));
        }
        out.emit(name, summary);
      }
    } else if (*c_oracle) {
      const auto polygon = io::load_domain(domain_path);
      const auto gauge = io::parse_gauge(io::text_or_file(gauge_text));
      if (!field_text.empty()) io::parse_field(io::text_or_file(field_text), &gauge);
      const auto r = oracle::fd_eigensolve_2d(polygon, gauge, h, step);
      json hist = json::array();
      for (const auto& l : r.history) hist.push_back({{"step", l.step}, {"unknowns", l.unknowns}, {"lambda", l.lambda}});
      out.emit("oracle", {{"h", r.h},
                          {"step", r.step},
                          {"lambda", r.lambda},
                          {"lambda_over_h", r.lambda_over_h},
                          {"error_estimate", r.error_estimate},
                          {"history", hist}});
    } else if (*c_study) {
      const auto polygon = io::load_domain(domain_path);
      const auto field = io::parse_field(io::text_or_file(field_text));
      const auto lo = energy::lowest_local_energy(field, polygon, opt, ctx);
      const double E = study_E ? *study_E : lo.value;
      const auto st = oracle::convergence_study(polygon, field, h_list, E);
      for (const auto& r : st.rows)
        out.emit("study", {{"h", r.h},
                           {"lambda", r.lambda},
                           {"lambda_over_h", r.lambda_over_h},
                           {"deviation", r.deviation},
                           {"grid_error", r.grid_error},
                           {"gauge_difference", r.gauge_difference},
                           {"gauge_ok", r.gauge_ok},
                           {"noisy", r.noisy},
                           {"step", r.step}});
      const auto b = asymptotics::lambda_bounds(polygon, field, h_list.back(), smoothness, lo, &st);
      out.emit("study", {{"E", st.E},
                         {"fitted_rate", st.fitted_rate},
                         {"deviations_decrease", st.deviations_decrease},
                         {"c_upper", st.c_upper},
                         {"sandwich_ok", st.sandwich_ok},
                         {"bounds", bound_json(b)}});
    }
  } catch (const Error& e) {
    std::cerr << json{{"error", e.what()}, {"exit_code", e.exit_code()}}.dump() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}, {"exit_code", 1}}.dump() << '\n';
    return 1;
  }
  return 0;
}
