#pragma once

#include <optional>
#include <string>

#include "magcorner/energy.hpp"
#include "magcorner/geometry.hpp"
#include "magcorner/oracle.hpp"

namespace magcorner::io {

/// Parses a domain document. Angles accept a `pi` suffix ("0.3pi").
///
///   # magcorner domain v1
///   dimension 3
///   vertex ID x y z
///   face ID plane nx ny nz loop V V V ...
///   face ID plane nx ny nz through x y z   (plane bounded by curved edges)
///   face ID sphere cx cy cz R [inward]
///   face ID cone apex-x apex-y apex-z ax ay az APERTURE
///   edge ID V V faces F F [opening A]
///   edge ID circle cx cy cz nx ny nz R samples N faces F F [opening A]
///   conical V aperture A axis ax ay az
///   polygon V V V ...          (dimension 2, counter-clockwise)
///
/// Openings left out are computed from the faces. The result is validated.
geometry::CornerDomain parse_domain(const std::string& text);
geometry::CornerDomain load_domain(const std::string& path);

/// "constant b", "constant bx by", "constant bx by bz", or
/// "polynomial x: c.. ; y: c.. ; z: c.." over the monomials
/// 1 x y z xx xy xz yy yz zz. Polynomial fields must be divergence free.
/// When `gauge` is given its curl must match the e3 component within 1e-10.
energy::FieldSpec parse_field(const std::string& text, const oracle::Gauge* gauge = nullptr);

/// "symmetric b [cx cy]" or "polynomial x: c.. ; y: c.." over the monomials
/// 1 x y xx xy yy xxx xxy xyy yyy.
oracle::Gauge parse_gauge(const std::string& text);

/// Tangent cone: "fullspace", "halfspace nx ny nz", "wedge ALPHA ex ey ez bx by bz",
/// "octant", "polycone r1x r1y r1z ; r2x ... ; ...", "circular APERTURE ax ay az".
geometry::ConeDescriptor parse_cone(const std::string& text);

/// Contents of `arg` when it names a readable file, otherwise `arg` itself.
std::string text_or_file(const std::string& arg);

}  // namespace magcorner::io
