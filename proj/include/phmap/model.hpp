#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "phmap/errors.hpp"

namespace phmap {

// Problem parameters: exponent p > 1 and optional boundary angle l in (0, pi/2].
struct Params {
    double p;
    std::optional<double> l{};

    void validate() const;
};

// Profile sample of the radial equation: colatitude h and slope dh = dh/dr at radius r.
struct RadialPoint {
    double r;
    double h;
    double dh;
};

// Ordered radial samples of one solution.
struct RadialProfile {
    std::vector<RadialPoint> points;
    Params params{1.0, {}};

    void validate() const;
};

// Which way logarithmic time runs relative to the radius.
enum class Direction { toward_origin, toward_infinity };  // t = -ln r resp. t = +ln r

// Autonomous log-time state f(t), df/dt, tagged with its time direction.
struct LogState {
    double t;
    double f;
    double df;
    Direction dir;
};

// Cotangent-plane state w = cot f, k = dw/dt.
struct PlanarState {
    double w;
    double k;
};

// Compactified disk coordinates: rho in [0,1], phi in [0,2*pi).
struct PoincareState {
    double rho;
    double phi;
};

// Slope-ratio state g = w / w' used on monotone arcs.
struct SlopeRatioState {
    double w;
    double g;
};

// Phase-plane energy readout.
struct EnergyDiag {
    double E;      // w^2 + k^2
    double dEdt;   // along the reversed flow
    double Gsign;  // (2-p)(1+w^2) - 2(p-1) w k
};

// Forward system runs in t = -ln r; reversed runs in t = +ln r.
enum class System { forward, reversed };

enum class SlopeVariant { g, gbar, j };

namespace model {

// Breakdown guard for the quasilinear denominator (p-1) dh^2 + sin^2(h)/r^2.
inline constexpr double denom_guard = 1e-14;

// Left-hand side of the radial steady-state equation, evaluated as written.
double residual_ode(const Params& params, const RadialPoint& pt, double ddh);

// The radial equation solved for h''. Throws singular_denominator at breakdown.
double explicit_second_derivative(const Params& params, const RadialPoint& pt);

// (dh, ddh) of the radial equation as a first-order system over r.
Eigen::Vector2d rhs_radial(const Params& params, const RadialPoint& pt);

// Log-time residual and right-hand side; the form depends on the direction tag.
double residual_log(const Params& params, const LogState& s, double ddf);
Eigen::Vector2d rhs_log(const Params& params, const LogState& s);

// Cotangent-plane vector field, forward or reversed time.
Eigen::Vector2d rhs_planar(const Params& params, const PlanarState& s, System system);

// Compactified vector field on the closed disk rho <= 1.
Eigen::Vector2d rhs_poincare(const Params& params, const PoincareState& s, System system);

// Slope-ratio equations: variants g and gbar evolve in w, variant j in t with w frozen.
double rhs_slope_ratio(const Params& params, const SlopeRatioState& s, SlopeVariant variant);

// The rational function F(w,g) of the g-equation and its g-derivative.
double slope_ratio_F(const Params& params, double w, double g);
double slope_ratio_dFdg(const Params& params, double w, double g);

// Radial energy density r (dh^2 + sin^2(h)/r^2)^{p/2}.
double lagrangian(const Params& params, const RadialPoint& pt);

// Energy E = w^2 + k^2 with its derivative along the reversed flow and the sign factor G.
EnergyDiag energy_diag(const Params& params, const PlanarState& s);

} // namespace model
} // namespace phmap
