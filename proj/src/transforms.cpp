#include "phmap/transforms.hpp"

#include <cmath>

namespace phmap {
namespace transforms {

namespace {

constexpr double two_pi = 2.0 * M_PI;

void require_finite(double a, double b, const char* who) {
    if (!std::isfinite(a) || !std::isfinite(b))
        throw invalid_input(std::string(who) + ": non-finite input");
}

} // namespace

LogState radial_to_log(const RadialPoint& pt, Direction dir) {
    require_finite(pt.h, pt.dh, "radial_to_log");
    if (!(pt.r > 0.0))
        throw invalid_input("radial_to_log: r must be positive");
    if (dir == Direction::toward_origin)
        return {-std::log(pt.r), pt.h, -pt.r * pt.dh, dir};
    return {std::log(pt.r), pt.h, pt.r * pt.dh, dir};
}

RadialPoint log_to_radial(const LogState& s) {
    require_finite(s.f, s.df, "log_to_radial");
    const double r = (s.dir == Direction::toward_origin) ? std::exp(-s.t) : std::exp(s.t);
    const double dh = (s.dir == Direction::toward_origin) ? -s.df / r : s.df / r;
    return {r, s.f, dh};
}

PlanarState log_to_planar(const LogState& s, BranchIndex branch) {
    require_finite(s.f, s.df, "log_to_planar");
    const double frac = s.f - branch * M_PI;
    if (!(frac > 0.0 && frac < M_PI))
        throw branch_boundary("log_to_planar: f not inside branch interval (m*pi, (m+1)*pi)");
    const double sf = std::sin(s.f);
    if (sf * sf < 1e-300)
        throw branch_boundary("log_to_planar: sin(f) vanishes on branch boundary");
    return {std::cos(s.f) / sf, -s.df / (sf * sf)};
}

LogState planar_to_log(const PlanarState& s, BranchIndex branch, Direction dir, double t) {
    require_finite(s.w, s.k, "planar_to_log");
    const double f = (M_PI_2 - std::atan(s.w)) + branch * M_PI;  // arccot into (0, pi)
    const double df = -s.k / (1.0 + s.w * s.w);
    return {t, f, df, dir};
}

PoincareState planar_to_poincare(const PlanarState& s) {
    require_finite(s.w, s.k, "planar_to_poincare");
    const double R = std::hypot(s.w, s.k);
    if (R == 0.0)
        return {0.0, 0.0};
    double phi = std::atan2(s.k, s.w);
    if (phi < 0.0)
        phi += two_pi;
    return {R / (1.0 + R), phi};
}

PlanarState poincare_to_planar(const PoincareState& s) {
    require_finite(s.rho, s.phi, "poincare_to_planar");
    if (s.rho < 0.0 || s.rho >= 1.0)
        throw out_of_chart("poincare_to_planar: rho must lie in [0,1)");
    const double R = s.rho / (1.0 - s.rho);
    return {R * std::cos(s.phi), R * std::sin(s.phi)};
}

SlopeRatioState planar_to_slope_ratio(const PlanarState& s) {
    require_finite(s.w, s.k, "planar_to_slope_ratio");
    if (s.k == 0.0)
        throw turning_point("planar_to_slope_ratio: k = 0 is a turning point of w");
    return {s.w, s.w / s.k};
}

} // namespace transforms
} // namespace phmap
