#pragma once

#include <Eigen/Core>

#include <map>
#include <string>

#include "specsurf/mesh.hpp"

namespace specsurf {

/// Unit round sphere from a subdivided icosahedron with chord edge lengths.
/// With flat_cap_radius > 0 the polar cap is replaced by its geodesic-polar
/// development, making the metric exactly Euclidean there; vertex 0 is the
/// pole and the cap is recorded as a flat patch of that radius.
IntrinsicMesh icosphere(int subdiv, double flat_cap_radius = 0.0);

/// Flat torus R^2 / (Z u + Z w) on an nx-by-ny grid. Cells split along the
/// shorter diagonal; the whole mesh is flat (one patch of infinite radius).
IntrinsicMesh flat_torus(int nx, int ny,
                         const Eigen::Vector2d& u = Eigen::Vector2d(1.0, 0.0),
                         const Eigen::Vector2d& w = Eigen::Vector2d(0.0, 1.0));

/// Flat round disk of the given radius, polar grid, one boundary loop.
IntrinsicMesh flat_disk(double radius, int n_boundary, int rings = 0);

/// Flat cylinder S^1 x [-L, L] of circumference 2*pi (developable widths),
/// two boundary loops at t = -L and t = +L. rings = 0 picks the count from
/// the aspect bound.
IntrinsicMesh cylinder_band(double half_length, int n_circle, int rings = 0);

/// Flat Moebius band of circumference 2*pi and length L: quotient of
/// S^1 x [-L, L] by (z,t) ~ (-z,-t), meshed on the fundamental domain
/// t in [0, L] with the core ring antipodally identified. One boundary loop.
IntrinsicMesh moebius_band(double length, int n_circle, int rings = 0);

/// String-keyed dispatch used by the CLI config layer.
/// kinds: icosphere (subdiv, flat_cap), flat_torus (nx, ny, ux, uy, wx, wy),
/// flat_disk (radius, n, rings), cylinder (L, n, rings), moebius (L, n, rings).
IntrinsicMesh build_primitive(const std::string& kind,
                              const std::map<std::string, double>& params);

}  // namespace specsurf
