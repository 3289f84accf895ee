#include "phmap/model.hpp"

#include <cmath>

namespace phmap {

void Params::validate() const {
    if (!std::isfinite(p) || p <= 1.0)
        throw invalid_input("params: p must be finite and > 1");
    if (l) {
        if (!std::isfinite(*l) || *l <= 0.0 || *l > M_PI_2 + 1e-15)
            throw invalid_input("params: l must lie in (0, pi/2]");
    }
}

void RadialProfile::validate() const {
    params.validate();
    double prev = 0.0;
    for (const auto& pt : points) {
        if (!(pt.r > prev))
            throw invalid_input("profile: radii must be positive and strictly increasing");
        if (!std::isfinite(pt.h) || !std::isfinite(pt.dh))
            throw invalid_input("profile: non-finite sample");
        const double s = std::sin(pt.h);
        const double den = (params.p - 1.0) * pt.dh * pt.dh + s * s / (pt.r * pt.r);
        if (den <= model::denom_guard)
            throw invalid_input("profile: quasilinear denominator at breakdown guard");
        prev = pt.r;
    }
}

namespace model {

namespace {

void check_finite(const Params& params, double a, double b, double c = 0.0) {
    if (!std::isfinite(params.p) || !std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c))
        throw invalid_input("model: non-finite input");
}

} // namespace

double residual_ode(const Params& params, const RadialPoint& pt, double ddh) {
    check_finite(params, pt.h, pt.dh, ddh);
    if (!(pt.r > 0.0))
        throw invalid_input("residual_ode: r must be positive");
    const double p = params.p;
    const double r = pt.r, dh = pt.dh;
    const double s = std::sin(pt.h), c = std::cos(pt.h);
    return (p - 1.0) * dh * dh * ddh
         + (p - 3.0) * (dh * dh * s * c / (r * r) - dh * s * s / (r * r * r))
         + dh * dh * dh / r
         + ddh * s * s / (r * r)
         - s * s * s * c / (r * r * r * r);
}

double explicit_second_derivative(const Params& params, const RadialPoint& pt) {
    check_finite(params, pt.h, pt.dh);
    if (!(pt.r > 0.0))
        throw invalid_input("explicit_second_derivative: r must be positive");
    const double p = params.p;
    const double r = pt.r, dh = pt.dh;
    const double s = std::sin(pt.h), c = std::cos(pt.h);
    const double den = (p - 1.0) * dh * dh + s * s / (r * r);
    if (den <= denom_guard)
        throw singular_denominator("explicit_second_derivative: denominator below guard");
    const double num = (p - 3.0) * (dh * dh * s * c / (r * r) - dh * s * s / (r * r * r))
                     + dh * dh * dh / r
                     - s * s * s * c / (r * r * r * r);
    return -num / den;
}

Eigen::Vector2d rhs_radial(const Params& params, const RadialPoint& pt) {
    return {pt.dh, explicit_second_derivative(params, pt)};
}

double residual_log(const Params& params, const LogState& s, double ddf) {
    check_finite(params, s.f, s.df, ddf);
    const double p = params.p;
    const double df = s.df;
    const double sf = std::sin(s.f), cf = std::cos(s.f);
    if (s.dir == Direction::toward_origin) {
        return (p - 1.0) * df * df * (ddf + df)
             + (p - 3.0) * (df * df * sf * cf + df * sf * sf)
             - df * df * df
             + (ddf + df) * sf * sf
             - sf * sf * sf * cf;
    }
    return ddf * ((p - 1.0) * df * df + sf * sf)
         + (2.0 - p) * df * (df * df + sf * sf)
         - sf * cf * ((3.0 - p) * df * df + sf * sf);
}

Eigen::Vector2d rhs_log(const Params& params, const LogState& s) {
    check_finite(params, s.f, s.df);
    const double p = params.p;
    const double df = s.df;
    const double sf = std::sin(s.f), cf = std::cos(s.f);
    const double den = (p - 1.0) * df * df + sf * sf;
    if (den <= denom_guard)
        throw singular_denominator("rhs_log: denominator below guard");
    double ddf;
    if (s.dir == Direction::toward_origin) {
        const double num = (p - 2.0) * df * df * df
                         + (p - 3.0) * (df * df * sf * cf + df * sf * sf)
                         + df * sf * sf
                         - sf * sf * sf * cf;
        ddf = -num / den;
    } else {
        ddf = (sf * cf * ((3.0 - p) * df * df + sf * sf)
             - (2.0 - p) * df * (df * df + sf * sf)) / den;
    }
    return {df, ddf};
}

Eigen::Vector2d rhs_planar(const Params& params, const PlanarState& s, System system) {
    check_finite(params, s.w, s.k);
    const double p = params.p;
    const double w = s.w, k = s.k;
    const double q = 1.0 + w * w;
    const double den = q * (q + (p - 1.0) * k * k);  // >= 1 for p > 1
    double dk;
    if (system == System::forward) {
        dk = (q + k * k) * (2.0 * (p - 1.0) * k * w + (2.0 - p) * q) * k / den - w;
    } else {
        dk = -(q + k * k) * ((2.0 - p) * q - 2.0 * (p - 1.0) * w * k) * k / den - w;
    }
    return {k, dk};
}

Eigen::Vector2d rhs_poincare(const Params& params, const PoincareState& s, System system) {
    check_finite(params, s.rho, s.phi);
    const double rho = s.rho;
    if (rho < 0.0 || rho > 1.0)
        throw out_of_chart("rhs_poincare: rho outside [0,1]");
    const double p = params.p;
    const double c = std::cos(s.phi), sn = std::sin(s.phi);
    const double om = 1.0 - rho;
    const double b = om * om + rho * rho * c * c;
    const double A = om * om + rho * rho;
    const double den = b * (b + (p - 1.0) * rho * rho * sn * sn);
    if (den <= denom_guard * denom_guard)
        throw singular_denominator("rhs_poincare: chart denominator vanishes (equator, cos phi = 0)");
    double B = 2.0 * (p - 1.0) * rho * rho * c * sn;
    B += (system == System::forward ? (2.0 - p) : -(2.0 - p)) * b;
    const double drho = rho * om * A * B * sn * sn / den;
    const double dphi = A * B * sn * c / den - 1.0;
    return {drho, dphi};
}

double slope_ratio_F(const Params& params, double w, double g) {
    check_finite(params, w, g);
    const double p = params.p;
    const double q = 1.0 + w * w;
    const double N = 2.0 * (p - 1.0) * q * g * g + (2.0 - p) * (2.0 - p) * q * g
                   + 2.0 * (p - 1.0) * w * w;
    const double D = q * g * g + (p - 1.0) * w * w;
    return w * w * g * N / (q * D);
}

double slope_ratio_dFdg(const Params& params, double w, double g) {
    check_finite(params, w, g);
    const double p = params.p;
    const double q = 1.0 + w * w;
    const double D = q * g * g + (p - 1.0) * w * w;
    const double n1 = 6.0 * (p - 1.0) * w * w * q * g * g
                    + 2.0 * (2.0 - p) * (2.0 - p) * w * w * q * g
                    + 2.0 * (p - 1.0) * w * w * w * w;
    const double n2 = 2.0 * (p - 1.0) * w * w * q * g * g * g
                    + (2.0 - p) * (2.0 - p) * w * w * q * g * g
                    + 2.0 * (p - 1.0) * w * w * w * w * g;
    return n1 / (q * D) - 2.0 * g * n2 / (D * D);
}

double rhs_slope_ratio(const Params& params, const SlopeRatioState& s, SlopeVariant variant) {
    check_finite(params, s.w, s.g);
    const double p = params.p;
    const double w = s.w, g = s.g;
    switch (variant) {
    case SlopeVariant::g: {
        if (w == 0.0)
            throw invalid_input("rhs_slope_ratio: w must be nonzero for variant g");
        const double bracket = g * g * g - (2.0 - p) * g * g + g - slope_ratio_F(params, w, g);
        return bracket / w;
    }
    case SlopeVariant::gbar: {
        if (w == 0.0)
            throw invalid_input("rhs_slope_ratio: w must be nonzero for variant gbar");
        const double q = 1.0 + w * w;
        const double N = -2.0 * (p - 1.0) * q * g * g + (2.0 - p) * (2.0 - p) * q * g
                       - 2.0 * (p - 1.0) * w * w;
        const double D = q * g * g + (p - 1.0) * w * w;
        const double Fbar = w * w * g * N / (q * D);
        const double bracket = g * g * g + (2.0 - p) * g * g + g - Fbar;
        return bracket / w;
    }
    case SlopeVariant::j: {
        // here s.g holds j and s.w the frozen cotangent value
        const double j = g;
        const double q = 1.0 + w * w;
        const double den = q * (q + (p - 1.0) * w * w * j * j);
        const double frac = (q + w * w * j * j)
                          * ((2.0 - p) * q - 2.0 * (p - 1.0) * w * w * j) * j / den;
        return -1.0 - j * j - frac;
    }
    }
    throw invalid_input("rhs_slope_ratio: unknown variant");
}

double lagrangian(const Params& params, const RadialPoint& pt) {
    check_finite(params, pt.h, pt.dh);
    if (!(pt.r > 0.0))
        throw invalid_input("lagrangian: r must be positive");
    const double s = std::sin(pt.h);
    const double dens = pt.dh * pt.dh + s * s / (pt.r * pt.r);
    return pt.r * std::pow(dens, params.p / 2.0);
}

EnergyDiag energy_diag(const Params& params, const PlanarState& s) {
    check_finite(params, s.w, s.k);
    const double p = params.p;
    const double w = s.w, k = s.k;
    const double q = 1.0 + w * w;
    const double den = q * (q + (p - 1.0) * k * k);
    EnergyDiag d;
    d.E = w * w + k * k;
    d.Gsign = (2.0 - p) * q - 2.0 * (p - 1.0) * w * k;
    d.dEdt = 2.0 * (q + k * k) * k * k * (-(2.0 - p) * q + 2.0 * (p - 1.0) * w * k) / den;
    return d;
}

} // namespace model
} // namespace phmap
