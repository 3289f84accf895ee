#pragma once

#include "phmap/model.hpp"

namespace phmap {

// Branch m of the cotangent chart: f lies in (m*pi, (m+1)*pi).
using BranchIndex = int;

namespace transforms {

// Radial <-> log-time, sign of t and df fixed by the direction tag.
LogState radial_to_log(const RadialPoint& pt, Direction dir);
RadialPoint log_to_radial(const LogState& s);

// Log-time <-> cotangent plane on branch m; throws branch_boundary at f = m*pi.
PlanarState log_to_planar(const LogState& s, BranchIndex branch);
LogState planar_to_log(const PlanarState& s, BranchIndex branch, Direction dir, double t = 0.0);

// Cotangent plane <-> compactified disk; phi lands in [0, 2*pi), origin maps to phi = 0.
PoincareState planar_to_poincare(const PlanarState& s);
PlanarState poincare_to_planar(const PoincareState& s);

// Slope-ratio chart g = w/k; throws turning_point when k = 0.
SlopeRatioState planar_to_slope_ratio(const PlanarState& s);

} // namespace transforms
} // namespace phmap
