#include "magcorner/planar_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Geometry>
#include <boost/math/tools/minima.hpp>

#include "magcorner/degennes.hpp"
#include "magcorner/errors.hpp"
#include "magcorner/halfplane_grid.hpp"
#include "magcorner/sector_grid.hpp"
#include "magcorner/sparse_eigen.hpp"

namespace magcorner::models {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double theta0() { return degennes::theta0_default().theta0; }

/// One discrete eigenpair reduced to what the mode profile needs.
struct Level {
  double value = 0.0;
  Eigen::VectorXd amplitude;  ///< |u| per cell
  Eigen::VectorXd mass;
  std::vector<double> distance;
};

struct Extrapolated {
  double value = 0.0;
  double estimate = 0.0;
};

/// Second-order Richardson on steps 2s, s, s/2: the finer pair is returned and
/// the disagreement with the coarser pair is the error estimate.
Extrapolated richardson(double coarse, double mid, double fine) {
  const double r0 = (4.0 * mid - coarse) / 3.0;
  const double r1 = (4.0 * fine - mid) / 3.0;
  return {r1, std::abs(r1 - r0)};
}

ModeProfile make_profile(const Level& lv) {
  ModeProfile p;
  if (lv.amplitude.size() == 0) return p;
  const double width = 0.5;
  double dmax = 0.0;
  for (double d : lv.distance) dmax = std::max(dmax, d);
  const int nshell = static_cast<int>(dmax / width) + 1;
  std::vector<double> env(static_cast<std::size_t>(nshell), 0.0);
  for (Eigen::Index i = 0; i < lv.amplitude.size(); ++i) {
    const int s = static_cast<int>(lv.distance[static_cast<std::size_t>(i)] / width);
    env[static_cast<std::size_t>(s)] = std::max(env[static_cast<std::size_t>(s)], lv.amplitude[i]);
  }
  const double top = *std::max_element(env.begin(), env.end());
  if (!(top > 0.0)) return p;
  std::size_t peak = 0;
  for (std::size_t s = 0; s < env.size(); ++s) {
    p.distance.push_back((static_cast<double>(s) + 0.5) * width);
    p.envelope.push_back(env[s] / top);
    if (env[s] == top) peak = s;
  }

  // Least-squares slope of log|Phi| on the tail, away from the Dirichlet rim.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t s = peak + 2; s < env.size(); ++s) {
    const double d = p.distance[s];
    if (d > 0.8 * dmax || p.envelope[s] < 1e-12) break;
    const double y = std::log(p.envelope[s]);
    sx += d;
    sy += y;
    sxx += d * d;
    sxy += d * y;
    ++n;
  }
  if (n >= 3) {
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    if (slope < 0.0) p.decay_rate = -0.5 * slope;
  }
  double num = 0.0, den = 0.0;
  for (Eigen::Index i = 0; i < lv.amplitude.size(); ++i) {
    const double u2 = lv.amplitude[i] * lv.amplitude[i] * lv.mass[i];
    num += std::exp(2.0 * p.decay_rate * lv.distance[static_cast<std::size_t>(i)]) * u2;
    den += u2;
  }
  p.decay_constant = den > 0.0 ? std::sqrt(num / den) : kNaN;
  p.certified = p.decay_rate > 0.0 && std::isfinite(p.decay_constant);
  return p;
}

void check_budget(Eigen::Index n, const Context& ctx) {
  if (n > ctx.disc.max_unknowns)
    throw ResourceLimit("grid with " + std::to_string(n) + " unknowns exceeds the budget of " +
                        std::to_string(ctx.disc.max_unknowns));
}

// ------------------------------------------------------------------ sectors

struct SectorProblem {
  double alpha = 0.0;
  grid::LinearPotential a;
  std::function<double(const Eigen::Vector2d&)> V;
  bool complex = true;
};

Level solve_polar(const SectorProblem& pb, double radius, double step, const Context& ctx, bool keep_mode) {
  const auto g = grid::PolarGrid::make(pb.alpha, radius, step);
  check_budget(g.size(), ctx);
  Level lv;
  auto fill = [&](const auto& res) {
    lv.value = res.values[0];
    if (!keep_mode) return;
    lv.amplitude = res.vectors.col(0).cwiseAbs();
    lv.distance.resize(static_cast<std::size_t>(g.size()));
    for (int i = 0; i < g.nr; ++i)
      for (int j = 0; j < g.nphi; ++j) lv.distance[static_cast<std::size_t>(g.index(i, j))] = g.r(i);
  };
  if (pb.complex) {
    const auto sys = grid::assemble_sector<linalg::Complex>(g, pb.a, pb.V);
    fill(grid::solve_sector(sys));
    if (keep_mode) lv.mass = sys.mass;
  } else {
    const auto sys = grid::assemble_sector<double>(g, pb.a, pb.V);
    fill(grid::solve_sector(sys));
    if (keep_mode) lv.mass = sys.mass;
  }
  return lv;
}

/// Extrapolated sector eigenvalue with a truncation check at 1.25 R.
BandSample solve_sector_problem(const SectorProblem& pb, const Context& ctx) {
  const double R = ctx.disc.radius, s = ctx.disc.step;
  const Level a = solve_polar(pb, R, 2 * s, ctx, false);
  const Level b = solve_polar(pb, R, s, ctx, false);
  const Level c = solve_polar(pb, R, s / 2, ctx, true);
  const Level wide = solve_polar(pb, 1.25 * R, 2 * s, ctx, false);
  const auto ex = richardson(a.value, b.value, c.value);
  BandSample out;
  out.raw = ex.value;
  out.value = ex.value;
  out.error_estimate = ex.estimate + std::abs(wide.value - a.value);
  out.radius = R;
  out.step = s;
  out.scheme = pb.complex ? "polar finite volume, exact link phases, Richardson" : "polar finite volume, Richardson";
  out.mode = make_profile(c);
  return out;
}

std::vector<double> disc_key(const Context& ctx) { return {ctx.disc.radius, ctx.disc.step}; }

void store_aux(cache::CacheEntry& e, const BandSample& s) {
  e.value = s.value;
  e.aux = {s.raw, s.error_estimate, static_cast<double>(s.flags), s.threshold, s.mode.decay_rate,
           s.mode.decay_constant};
}

BandSample from_entry(const cache::CacheEntry& e, std::string model, std::vector<double> params, const Context& ctx) {
  BandSample s;
  s.model = std::move(model);
  s.params = std::move(params);
  s.value = e.value;
  if (e.aux.size() >= 6) {
    s.raw = e.aux[0];
    s.error_estimate = e.aux[1];
    s.flags = static_cast<unsigned>(e.aux[2]);
    s.threshold = e.aux[3];
    s.mode.decay_rate = e.aux[4];
    s.mode.decay_constant = e.aux[5];
    s.mode.certified = s.mode.decay_rate > 0.0 && std::isfinite(s.mode.decay_constant);
  }
  s.radius = ctx.disc.radius;
  s.step = ctx.disc.step;
  return s;
}

/// Runs `compute` through the cache; a fresh result keeps its mode profile.
template <typename F>
BandSample cached_band(const Context& ctx, const std::string& model, const std::vector<double>& params,
                       const std::vector<double>& disc, double tol, F&& compute) {
  std::vector<double> disc_tol = disc;
  disc_tol.push_back(tol);
  const cache::CacheKey key{model, params, disc_tol};
  if (ctx.cache) {
    if (auto hit = ctx.cache->lookup(key)) {
      BandSample s = from_entry(*hit, model, params, ctx);
      s.from_cache = true;
      return s;
    }
  }
  BandSample s = compute();
  s.model = model;
  s.params = params;
  if (ctx.cache) {
    cache::CacheEntry e;
    e.key = key;
    e.tolerance = tol;
    store_aux(e, s);
    ctx.cache->store(e);
  }
  return s;
}

void clamp_to(BandSample& s, double threshold, double tol, Flag near_flag) {
  s.threshold = threshold;
  if (s.raw >= threshold - tol) {
    s.flags |= near_flag;
    if (s.raw > threshold) s.flags |= kClamped;
    s.value = std::min(s.raw, threshold);
  }
}

// ------------------------------------------------------------------ sigma

/// Mode stretch along the boundary: the well flattens like 1/sqrt(sin theta).
double sigma_stretch(double theta) { return std::min(8.0, 1.0 / std::sqrt(std::sin(theta))); }

Level solve_rect(double theta, double half_width, double height, double step, const Context& ctx, bool keep_mode) {
  const double w = sigma_stretch(theta);
  const double shift = std::min(height, height / std::tan(theta));
  const double tau = degennes::theta0_default().tau0 * std::sqrt(std::cos(theta));
  const double c = std::cos(theta), sn = std::sin(theta);
  const auto g = grid::RectGrid::make(-half_width, half_width + shift, height, step * w, step);
  check_budget(g.size(), ctx);
  const auto sys = grid::assemble_rect(g, [&](double x, double y) {
    const double v = tau + y * c - x * sn;
    return v * v;
  });
  const auto res = linalg::lowest_eigenpairs(sys.A, sys.mass);
  Level lv;
  lv.value = res.values[0];
  if (keep_mode) {
    lv.amplitude = res.vectors.col(0).cwiseAbs();
    lv.mass = sys.mass;
    Eigen::Index peak = 0;
    lv.amplitude.maxCoeff(&peak);
    const double px = g.x(static_cast<int>(peak % g.nx)), py = g.y(static_cast<int>(peak / g.nx));
    lv.distance.resize(static_cast<std::size_t>(g.size()));
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        lv.distance[static_cast<std::size_t>(g.index(i, j))] = std::hypot(g.x(i) - px, g.y(j) - py);
  }
  return lv;
}

BandSample compute_sigma(double theta, double tol, const Context& ctx) {
  const double s = ctx.disc.step;
  const double w = sigma_stretch(theta);
  double height = 12.0, half_width = 8.0 + 7.0 * w;
  const double max_half_width = 3.0 * half_width;
  Level coarse = solve_rect(theta, half_width, height, 2 * s, ctx, false);

  // Grow the truncation box, height first, until the coarse value settles.
  double truncation = 0.0;
  while (true) {
    const double next = std::min(1.5 * height, ctx.disc.sigma_max_height);
    if (next <= height) break;
    const Level taller = solve_rect(theta, half_width, next, 2 * s, ctx, false);
    truncation = std::abs(taller.value - coarse.value);
    height = next;
    coarse = taller;
    if (truncation <= 0.25 * tol) break;
  }
  double width_change = 0.0;
  while (true) {
    const double next = std::min(1.5 * half_width, max_half_width);
    if (next <= half_width) break;
    const Level wider = solve_rect(theta, next, height, 2 * s, ctx, false);
    width_change = std::abs(wider.value - coarse.value);
    if (width_change <= 0.25 * tol) break;
    half_width = next;
    coarse = wider;
  }
  truncation += width_change;

  const Level mid = solve_rect(theta, half_width, height, s, ctx, false);
  const Level fine = solve_rect(theta, half_width, height, s / 2, ctx, true);
  const auto ex = richardson(coarse.value, mid.value, fine.value);
  BandSample out;
  out.raw = ex.value;
  out.value = ex.value;
  out.error_estimate = ex.estimate + truncation;
  out.radius = height;
  out.step = s;
  out.scheme = "cartesian finite differences on a truncated half-plane, Richardson";
  out.mode = make_profile(fine);
  return out;
}

// ------------------------------------------------------------------ wedges

SectorProblem fiber_problem(double alpha, const Eigen::Vector3d& b, double tau, const Context& ctx) {
  SectorProblem pb;
  pb.alpha = alpha;
  pb.a.M(1, 0) = b(0);
  pb.complex = ctx.force_complex || b(0) != 0.0;
  const double b1 = b(1), b2 = b(2);
  pb.V = [tau, b1, b2](const Eigen::Vector2d& y) {
    const double v = tau + b1 * y(1) - b2 * y(0);
    return v * v;
  };
  return pb;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0 * M_PI)) throw InvalidDomain("opening must lie in (0, 2 pi)");
}

Eigen::Vector3d check_unit(const Eigen::Vector3d& b) {
  if (std::abs(b.norm() - 1.0) > 1e-12) throw InvalidDomain("wedge field must have unit length");
  return b;
}

}  // namespace

// ------------------------------------------------------------------ public

BandSample sigma(double theta, double tol, const Context& ctx) {
  if (!(theta >= 0.0 && theta <= M_PI_2 + 1e-15)) throw InvalidDomain("sigma: angle outside [0, pi/2]");
  BandSample out;
  out.model = "sigma";
  out.params = {theta};
  out.threshold = 1.0;
  if (theta == 0.0) {
    const auto& t0 = degennes::theta0_default();
    out.value = out.raw = t0.theta0;
    out.error_estimate = t0.error_estimate;
    out.scheme = "de Gennes minimum";
    return out;
  }
  if (theta >= M_PI_2) {
    out.value = out.raw = 1.0;
    out.scheme = "exact";
    return out;
  }
  const std::vector<double> disc = {ctx.disc.step, ctx.disc.sigma_max_height};
  out = cached_band(ctx, "sigma", {theta}, disc, tol, [&] {
    BandSample s = compute_sigma(theta, tol, ctx);
    // Within its own error of 1 the gap cannot be certified.
    clamp_to(s, 1.0, tol + s.error_estimate, kLowConfidence);
    if (!s.has(kLowConfidence) && s.error_estimate > tol) {
      if (s.error_estimate > 10.0 * tol)
        throw NoConvergence("sigma(" + std::to_string(theta) + "): error estimate " +
                            std::to_string(s.error_estimate) + " exceeds tolerance");
      s.flags |= kLowConfidence;
    }
    return s;
  });
  return out;
}

BandSample sector_energy(double alpha, double tol, const Context& ctx, SectorGauge gauge) {
  check_alpha(alpha);
  const double g = gauge == SectorGauge::Symmetric ? 0.0 : 1.0;
  return cached_band(ctx, "sector", {alpha, g}, disc_key(ctx), tol, [&] {
    SectorProblem pb;
    pb.alpha = alpha;
    if (gauge == SectorGauge::Symmetric)
      pb.a.M << 0.0, -0.5, 0.5, 0.0;
    else
      pb.a.M << 0.0, -1.0, 0.0, 0.0;
    BandSample s = solve_sector_problem(pb, ctx);
    clamp_to(s, theta0(), tol, kEssentialCollision);
    return s;
  });
}

std::vector<double> sector_eigenvalues(double alpha, int count, const Context& ctx) {
  check_alpha(alpha);
  if (count < 1) throw InvalidDomain("sector_eigenvalues: count must be positive");
  grid::LinearPotential a;
  a.M << 0.0, -0.5, 0.5, 0.0;
  linalg::EigenOptions opts;
  opts.n_eigs = count;
  std::vector<Eigen::VectorXd> levels;
  for (double st : {2 * ctx.disc.step, ctx.disc.step, 0.5 * ctx.disc.step}) {
    const auto g = grid::PolarGrid::make(alpha, ctx.disc.radius, st);
    check_budget(g.size(), ctx);
    levels.push_back(grid::solve_sector(grid::assemble_sector<linalg::Complex>(g, a), opts).values);
  }
  std::vector<double> out;
  for (int k = 0; k < count; ++k) out.push_back(richardson(levels[0][k], levels[1][k], levels[2][k]).value);
  std::sort(out.begin(), out.end());
  return out;
}

BandSample wedge_fiber(double alpha, const Eigen::Vector3d& b, double tau, double tol, const Context& ctx) {
  check_alpha(alpha);
  check_unit(b);
  const std::vector<double> params = {alpha, b(0), b(1), b(2), tau, ctx.force_complex ? 1.0 : 0.0};
  return cached_band(ctx, "wedge-fiber", params, disc_key(ctx), tol, [&] {
    BandSample s = solve_sector_problem(fiber_problem(alpha, b, tau, ctx), ctx);
    s.threshold = kNaN;
    if (s.error_estimate > tol) s.flags |= kLowConfidence;
    return s;
  });
}

std::pair<double, double> wedge_face_angles(double alpha, const Eigen::Vector3d& b) {
  const Eigen::Vector3d np(0.0, -std::sin(alpha / 2), std::cos(alpha / 2));
  const Eigen::Vector3d nm(0.0, -std::sin(alpha / 2), -std::cos(alpha / 2));
  const double bn = b.norm();
  auto angle = [&](const Eigen::Vector3d& n) { return geometry::angle_from_sine(std::abs(b.dot(n)) / bn); };
  return {angle(np), angle(nm)};
}

WedgeEnergy wedge_energy(double alpha, const Eigen::Vector3d& b, double tol, const Context& ctx) {
  check_alpha(alpha);
  check_unit(b);
  // Complex conjugation maps the problem for -b at tau onto b at -tau.
  const int lead = std::abs(b(0)) > 1e-14 ? 0 : std::abs(b(1)) > 1e-14 ? 1 : 2;
  if (b(lead) < 0) {
    WedgeEnergy w = wedge_energy(alpha, -b, tol, ctx);
    if (w.tau_star) w.tau_star = -*w.tau_star;
    if (w.age && w.age->tau_star) w.age->tau_star = -*w.age->tau_star;
    return w;
  }
  WedgeEnergy out;
  std::tie(out.theta_plus, out.theta_minus) = wedge_face_angles(alpha, b);
  out.e_star = sigma(std::min(out.theta_plus, out.theta_minus), tol, ctx).value;

  auto finish = [&](const BandSample& band, double tau_star) {
    out.band = band;
    out.raw = band.raw;
    if (band.raw < out.e_star - tol) {
      out.value = band.raw;
      out.tau_star = tau_star;
      AGEDescriptor age;
      age.k = 2;
      age.d = 2;
      age.decay_cone = "(x2, x3) in the sector";
      age.phase = "exp(i tau* x1)";
      age.tau_star = tau_star;
      age.energy = band.raw;
      age.profile = band.mode;
      out.age = age;
    } else {
      out.value = std::min(band.raw, out.e_star);
      out.band.threshold = out.e_star;
      out.band.flags |= kEssentialCollision;
      if (band.raw > out.e_star) out.band.flags |= kClamped;
    }
    return out;
  };

  // Field along the edge: s(tau) = tau^2 + E(1, S_alpha).
  if (std::abs(b(1)) < 1e-12 && std::abs(b(2)) < 1e-12) return finish(sector_energy(alpha, tol, ctx), 0.0);

  const std::vector<double> params = {alpha, b(0), b(1), b(2), ctx.force_complex ? 1.0 : 0.0};
  const std::vector<double> disc = {ctx.disc.radius, ctx.disc.step, ctx.disc.coarse_radius, ctx.disc.coarse_step, tol};
  const cache::CacheKey key{"wedge-min", params, disc};
  if (ctx.cache) {
    if (auto hit = ctx.cache->lookup(key); hit && hit->aux.size() >= 7) {
      BandSample band = from_entry(*hit, "wedge-fiber", {alpha, b(0), b(1), b(2), hit->aux[6]}, ctx);
      band.value = band.raw;
      band.flags = static_cast<unsigned>(hit->aux[2]);
      band.from_cache = true;
      return finish(band, hit->aux[6]);
    }
  }

  // Coarse scan of the band on a small sector, a finer pass around its best
  // sample, then Brent on the full radius.
  auto coarse_at = [&](double tau) {
    return solve_polar(fiber_problem(alpha, b, tau, ctx), ctx.disc.coarse_radius, ctx.disc.coarse_step, ctx, false)
        .value;
  };
  const double lo = -6.0, hi = 6.0;
  double best_tau = 0.0, best = std::numeric_limits<double>::infinity();
  auto scan = [&](double from, double to, double dt) {
    for (int k = 0; from + k * dt <= to + 1e-12; ++k) {
      const double tau = from + k * dt;
      const double v = coarse_at(tau);
      if (v < best) {
        best = v;
        best_tau = tau;
      }
    }
  };
  scan(lo, hi, 0.25);
  scan(std::max(lo, best_tau - 0.2), std::min(hi, best_tau + 0.2), 0.05);
  auto band_at = [&](double tau) {
    return solve_polar(fiber_problem(alpha, b, tau, ctx), ctx.disc.radius, 2 * ctx.disc.step, ctx, false).value;
  };
  std::uintmax_t iters = 40;
  const double tau_star = boost::math::tools::brent_find_minima(band_at, std::max(lo, best_tau - 0.25),
                                                                std::min(hi, best_tau + 0.25), 16, iters)
                              .first;

  BandSample band = wedge_fiber(alpha, b, tau_star, tol, ctx);
  if (ctx.cache) {
    cache::CacheEntry e;
    e.key = key;
    e.tolerance = tol;
    store_aux(e, band);
    e.aux.push_back(tau_star);
    ctx.cache->store(e);
  }
  return finish(band, tau_star);
}

HalfSpaceEnergy halfspace_energy(const Eigen::Vector3d& B, const Eigen::Vector3d& normal, double tol,
                                 const Context& ctx) {
  const double modulus = B.norm();
  if (modulus == 0.0) throw ZeroField();
  HalfSpaceEnergy out;
  const Eigen::Vector3d n = normal.normalized();
  const Eigen::Vector3d b = B / modulus;
  out.theta = geometry::angle_from_sine(std::abs(b.dot(n)));
  out.band = sigma(out.theta, tol, ctx);
  out.value = modulus * out.band.value;
  if (out.band.value >= 1.0 - 3.0 * tol) return out;

  AGEDescriptor age;
  age.d = 1;
  age.energy = out.band.value;
  // Reference frame: y1 along the tangential part of B, z = inward normal.
  Eigen::Vector3d t = b - b.dot(n) * n;
  if (t.norm() < 1e-12) t = n.unitOrthogonal();
  t.normalize();
  age.frame.col(0) = t;
  age.frame.col(1) = (-n).cross(t);
  age.frame.col(2) = -n;
  if (out.theta < 1e-12) {
    const auto& t0 = degennes::theta0_default();
    const auto sol = degennes::mu(t0.tau0);
    age.k = 1;
    age.decay_cone = "z (normal distance)";
    age.phase = "exp(-i sqrt(Theta0) y1)";
    age.tau_star = t0.tau0;
    double top = 0.0;
    for (double v : sol.profile) top = std::max(top, std::abs(v));
    for (std::size_t i = 0; i < sol.profile.size(); i += 16) {
      age.profile.distance.push_back(sol.z(i));
      age.profile.envelope.push_back(std::abs(sol.profile[i]) / top);
    }
    age.profile.decay_rate = sol.decay_rate;
    age.profile.decay_constant = sol.decay_constant;
    age.profile.certified = true;
  } else {
    age.k = 2;
    age.decay_cone = "(y2, z)";
    age.phase = "1";
    age.profile = out.band.mode;
  }
  out.age = age;
  return out;
}

AGEDescriptor age_descriptor(const Eigen::Vector3d& B_unit, const geometry::ConeDescriptor& cone, double tol,
                             const Context& ctx) {
  using geometry::ConeKind;
  switch (cone.kind) {
    case ConeKind::FullSpace: {
      AGEDescriptor age;
      age.k = 2;
      age.d = 0;
      age.decay_cone = "(x2, x3) orthogonal to B";
      age.phase = "1";
      age.energy = 1.0;
      const Eigen::Vector3d b = B_unit.norm() > 0 ? Eigen::Vector3d(B_unit.normalized()) : Eigen::Vector3d::UnitZ();
      age.frame.col(0) = b;
      age.frame.col(1) = b.unitOrthogonal();
      age.frame.col(2) = b.cross(age.frame.col(1));
      // Psi = exp(-|z|^2 / 4); its weighted norm ratio at c = 1/2 by radial quadrature.
      double num = 0.0, den = 0.0;
      for (int i = 0; i <= 160; ++i) {
        const double r = 0.05 * i;
        const double psi = std::exp(-r * r / 4.0);
        if (i % 4 == 0) {
          age.profile.distance.push_back(r);
          age.profile.envelope.push_back(psi);
        }
        num += std::exp(r) * psi * psi * r;
        den += psi * psi * r;
      }
      age.profile.decay_rate = 0.5;
      age.profile.decay_constant = std::sqrt(num / den);
      age.profile.certified = true;
      return age;
    }
    case ConeKind::HalfSpace: {
      auto hs = halfspace_energy(B_unit, cone.normal, tol, ctx);
      if (!hs.age) throw NotCaseOne("half-space with a normal field has no decaying eigenvector");
      return *hs.age;
    }
    case ConeKind::Wedge: {
      const Eigen::Matrix3d F = cone.wedge_frame();
      const Eigen::Vector3d b = (F.transpose() * B_unit).normalized();
      auto we = wedge_energy(cone.opening, b, tol, ctx);
      if (!we.age) throw NotCaseOne("wedge energy is not below the substructure energy");
      AGEDescriptor age = *we.age;
      age.frame = F;
      return age;
    }
    case ConeKind::Cone3D:
      break;
  }
  throw NotCaseOne("three-dimensional cones need a cone solve to produce an eigenvector");
}

}  // namespace magcorner::models
