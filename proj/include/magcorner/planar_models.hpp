#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "magcorner/cache.hpp"
#include "magcorner/geometry.hpp"

namespace magcorner::models {

/// Grid parameters for the two-dimensional model solvers. Values are computed
/// on the steps 2*step, step and step/2 and extrapolated.
struct Discretization2D {
  double radius = 16.0;        ///< truncation radius of sectors (|B| = 1 units)
  double step = 1.0 / 8.0;
  double coarse_radius = 8.0;  ///< tau scan of the wedge band
  double coarse_step = 1.0 / 4.0;
  double sigma_max_height = 40.0;  ///< cap on the half-plane truncation height in sigma
  long max_unknowns = 2'000'000;   ///< refinement budget before NoConvergence
};

struct Context {
  Discretization2D disc;
  cache::BandCache* cache = nullptr;
  bool force_complex = false;  ///< assemble real problems with the complex solver
};

enum Flag : unsigned {
  kNone = 0,
  kLowConfidence = 1u << 0,      ///< value within tol of a threshold it is clamped to
  kEssentialCollision = 1u << 1, ///< value within tol of the essential spectrum bottom
  kClamped = 1u << 2,            ///< raw value replaced by the threshold
};

/// |Phi| sampled against the distance to the reference point of the model,
/// together with the exponential decay certificate ||e^{c|z|} Phi|| <= C ||Phi||.
struct ModeProfile {
  std::vector<double> distance;
  std::vector<double> envelope;  ///< max |Phi| over the shell, normalized to max 1
  double decay_rate = 0.0;       ///< c
  double decay_constant = 0.0;   ///< C
  bool certified = false;

  bool empty() const { return distance.empty(); }
};

struct BandSample {
  std::string model;  ///< sigma | sector | wedge-fiber
  std::vector<double> params;
  double value = 0.0;           ///< possibly clamped to the threshold
  double raw = 0.0;             ///< extrapolated discrete value
  double error_estimate = 0.0;  ///< Richardson difference plus truncation change
  double threshold = 0.0;       ///< clamp level (1 for sigma, Theta0 for sectors)
  unsigned flags = kNone;
  double radius = 0.0;
  double step = 0.0;
  std::string scheme;
  ModeProfile mode;
  bool from_cache = false;

  bool has(Flag f) const { return (flags & f) != 0; }
};

/// Admissible generalized eigenvector in the reference frame of the model.
struct AGEDescriptor {
  int k = 0;                  ///< directions of exponential decay
  int d = 0;                  ///< reduced dimension of the cone
  std::string decay_cone;     ///< variables in which Phi decays
  std::string phase;          ///< oscillating factor, polynomial of degree <= 2
  Eigen::Matrix3d frame = Eigen::Matrix3d::Identity();  ///< columns: reference axes in world coordinates
  std::optional<double> tau_star;
  double energy = 0.0;        ///< for |B| = 1
  ModeProfile profile;
};

/// Ground energy of the half-space model with unit field at angle theta to the boundary.
BandSample sigma(double theta, double tol = 1e-4, const Context& ctx = {});

enum class SectorGauge { Symmetric, Landau };

/// E(1, S_alpha) with Neumann sides. The value is clamped at Theta0 when it
/// reaches the bottom of the essential spectrum.
BandSample sector_energy(double alpha, double tol = 1e-4, const Context& ctx = {},
                         SectorGauge gauge = SectorGauge::Symmetric);

/// Lowest `count` eigenvalues of the truncated unit-field sector, extrapolated,
/// without clamping.
std::vector<double> sector_eigenvalues(double alpha, int count, const Context& ctx = {});

/// Bottom of the fiber operator (tau + b1 x3 - b2 x2)^2 - d2^2 + (-i d3 + b0 x2)^2
/// on the sector of opening alpha; b is in wedge-frame coordinates.
BandSample wedge_fiber(double alpha, const Eigen::Vector3d& b, double tau, double tol = 1e-4,
                       const Context& ctx = {});

struct WedgeEnergy {
  double value = 0.0;
  double raw = 0.0;
  double e_star = 0.0;
  double theta_plus = 0.0, theta_minus = 0.0;
  std::optional<double> tau_star;
  std::optional<AGEDescriptor> age;
  BandSample band;
};

/// E(B, W_alpha) for a unit field b in wedge-frame coordinates.
WedgeEnergy wedge_energy(double alpha, const Eigen::Vector3d& b, double tol = 1e-4, const Context& ctx = {});

/// Face angles theta+- in [0, pi/2] of a unit wedge-frame field.
std::pair<double, double> wedge_face_angles(double alpha, const Eigen::Vector3d& b);

struct HalfSpaceEnergy {
  double value = 0.0;
  double theta = 0.0;
  std::optional<AGEDescriptor> age;  ///< empty for a normal field
  BandSample band;
};

HalfSpaceEnergy halfspace_energy(const Eigen::Vector3d& B, const Eigen::Vector3d& normal, double tol = 1e-4,
                                 const Context& ctx = {});

/// AGE per reduced dimension for a configuration in case (i), or the full space.
/// Throws NotCaseOne otherwise.
AGEDescriptor age_descriptor(const Eigen::Vector3d& B_unit, const geometry::ConeDescriptor& cone, double tol = 1e-4,
                             const Context& ctx = {});

}  // namespace magcorner::models
