#include "phmap/critpoints.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace phmap {
namespace critpoints {

namespace {

constexpr double two_pi = 2.0 * M_PI;

double wrap_angle(double a) {
    a = std::fmod(a, two_pi);
    if (a < 0.0)
        a += two_pi;
    return a;
}

std::array<std::complex<double>, 2> spectrum(const Eigen::Matrix2d& m) {
    Eigen::EigenSolver<Eigen::Matrix2d> solver(m);
    std::array<std::complex<double>, 2> ev{solver.eigenvalues()(0), solver.eigenvalues()(1)};
    if (ev[0].real() > ev[1].real() ||
        (ev[0].real() == ev[1].real() && ev[0].imag() > ev[1].imag()))
        std::swap(ev[0], ev[1]);
    return ev;
}

std::string classify_spectrum(const std::array<std::complex<double>, 2>& ev) {
    const double re0 = ev[0].real(), re1 = ev[1].real();
    const double tol = 1e-12 * (1.0 + std::abs(re0) + std::abs(re1));
    if (std::abs(re0) < tol && std::abs(re1) < tol)
        return "center";
    if (re0 < 0.0 && re1 > 0.0)
        return "saddle";
    if (re0 > 0.0)
        return "unstable-node/focus";
    if (re1 < 0.0)
        return "stable-node/focus";
    return "saddle";
}

} // namespace

double theta2(double p) {
    return std::acos((p - 1.0) / std::sqrt(p * p - 2.0 * p + 2.0));
}

double angle_equation_residual(const Params& params, System system, double theta) {
    params.validate();
    const double p = params.p;
    const double w = std::cos(theta), k = std::sin(theta);
    const double sgn = (system == System::forward) ? 1.0 : -1.0;
    const double q5 = k * (w * w + k * k) * (2.0 * (p - 1.0) * w * k + sgn * (2.0 - p) * w * w)
                    - w * w * w * (w * w + (p - 1.0) * k * k);
    const double p5 = k * w * w * (w * w + (p - 1.0) * k * k);
    return w * q5 - k * p5;
}

std::vector<double> infinity_angles(const Params& params, System system) {
    params.validate();
    const double t2 = theta2(params.p);
    std::vector<double> angles;
    if (system == System::forward)
        angles = {M_PI_2, 3.0 * M_PI_2, M_PI_4, 5.0 * M_PI_4, M_PI - t2, two_pi - t2};
    else
        angles = {M_PI_2, 3.0 * M_PI_2, 3.0 * M_PI_4, 7.0 * M_PI_4, t2, M_PI + t2};
    for (double& a : angles)
        a = wrap_angle(a);
    std::sort(angles.begin(), angles.end());
    for (double a : angles) {
        if (std::abs(angle_equation_residual(params, system, a)) > 1e-10)
            throw consistency_failure("infinity_angles: closed-form angle fails the angle equation");
    }
    return angles;
}

std::vector<double> interesting_angles(const std::vector<double>& angles) {
    std::vector<double> out;
    for (double a : angles)
        if (std::sin(a) * std::cos(a) >= -1e-15)
            out.push_back(a);
    return out;
}

double named_angle(const Params& params, System system, const std::string& which) {
    params.validate();
    const double t2 = theta2(params.p);
    if (system == System::forward) {
        if (which == "P1") return M_PI_4;
        if (which == "P1*") return 5.0 * M_PI_4;
        if (which == "P2") return M_PI - t2;
        if (which == "P2*") return wrap_angle(two_pi - t2);
        if (which == "P3") return M_PI_2;
        if (which == "P3*") return 3.0 * M_PI_2;
    } else {
        if (which == "P1") return 7.0 * M_PI_4;
        if (which == "P1*") return 3.0 * M_PI_4;
        if (which == "P2") return t2;
        if (which == "P2*") return M_PI + t2;
        if (which == "P3") return 3.0 * M_PI_2;
        if (which == "P3*") return M_PI_2;
    }
    throw invalid_input("named_angle: unknown point name '" + which + "'");
}

Eigen::Matrix2d numerical_jacobian(const Params& params, System system,
                                   const PoincareState& at) {
    params.validate();
    auto f = [&](double rho, double phi) {
        return model::rhs_poincare(params, {rho, phi}, system);
    };
    Eigen::Matrix2d J;
    const double hr = 1e-6 * std::max(1.0, std::abs(at.rho));
    if (at.rho >= 1.0 - 1e-9) {
        // one-sided second-order stencil; the chart ends at the equator
        const Eigen::Vector2d f0 = f(at.rho, at.phi);
        const Eigen::Vector2d f1 = f(at.rho - hr, at.phi);
        const Eigen::Vector2d f2 = f(at.rho - 2.0 * hr, at.phi);
        J.col(0) = (3.0 * f0 - 4.0 * f1 + f2) / (2.0 * hr);
    } else {
        J.col(0) = (f(at.rho + hr, at.phi) - f(at.rho - hr, at.phi)) / (2.0 * hr);
    }
    const double hp = 1e-6 * std::max(1.0, std::abs(at.phi));
    J.col(1) = (f(at.rho, at.phi + hp) - f(at.rho, at.phi - hp)) / (2.0 * hp);
    return J;
}

CriticalPointReport linearize_finite(const Params& params, System system) {
    params.validate();
    const double p = params.p;
    const double a = (system == System::forward) ? (2.0 - p) : -(2.0 - p);
    Eigen::Matrix2d m;
    m << 0.0, 1.0, -1.0, a;
    std::array<std::complex<double>, 2> ev;
    const double disc = a * a - 4.0;
    if (disc < 0.0) {
        const double im = std::sqrt(-disc) / 2.0;
        ev = {std::complex<double>(a / 2.0, -im), std::complex<double>(a / 2.0, im)};
    } else {
        const double rt = std::sqrt(disc) / 2.0;
        ev = {std::complex<double>(a / 2.0 - rt, 0.0), std::complex<double>(a / 2.0 + rt, 0.0)};
    }
    CriticalPointReport rep;
    rep.system = system;
    rep.name = "O";
    rep.at_infinity = false;
    rep.matrix = m;
    rep.eigenvalues = ev;
    rep.classification = classify_spectrum(ev);
    rep.basis = "analytic";
    return rep;
}

CriticalPointReport linearize_infinity(const Params& params, System system,
                                       const std::string& which) {
    params.validate();
    if (which != "P1" && which != "P1*" && which != "P2" && which != "P2*")
        throw invalid_input("linearize_infinity: expected P1, P1*, P2 or P2*");
    const double p = params.p;
    const double angle = named_angle(params, system, which);
    const bool family1 = (which == "P1" || which == "P1*");
    Eigen::Matrix2d m;
    if (system == System::forward) {
        if (family1)
            m << -1.0, 0.0, 0.0, 2.0;
        else
            m << 1.0 / (p - 1.0), 0.0, 0.0, -(p * p - 2.0 * p + 2.0) / (p - 1.0);
    } else {
        if (family1)
            m << 1.0, 0.0, 2.0 * (p - 1.0) / p, -2.0;
        else
            m << -1.0 / (p - 1.0), 0.0, 2.0 / p, (p * p - 2.0 * p + 2.0) / (p - 1.0);
    }
    const Eigen::Matrix2d J = numerical_jacobian(params, system, {1.0, angle});
    const auto ev = spectrum(m);
    const auto evj = spectrum(J);
    const double scale = 1.0 + std::abs(ev[0]) + std::abs(ev[1]);
    if (std::abs(ev[0] - evj[0]) > 1e-6 * scale || std::abs(ev[1] - evj[1]) > 1e-6 * scale)
        throw consistency_failure("linearize_infinity: spectrum of the closed-form matrix "
                                  "disagrees with the chart Jacobian");
    CriticalPointReport rep;
    rep.system = system;
    rep.name = which;
    rep.at_infinity = true;
    rep.angle = angle;
    rep.matrix = m;
    rep.numerical_jacobian = J;
    rep.eigenvalues = ev;
    rep.classification = classify_spectrum(ev);
    rep.basis = "analytic";
    return rep;
}

CriticalPointReport classify_nonhyperbolic(const Params& params, System system,
                                           const std::string& which) {
    params.validate();
    if (which != "P3" && which != "P3*")
        throw invalid_input("classify_nonhyperbolic: expected P3 or P3*");
    CriticalPointReport rep;
    rep.system = system;
    rep.name = which;
    rep.at_infinity = true;
    rep.angle = named_angle(params, system, which);
    rep.classification = "nonhyperbolic-elliptic";
    rep.basis = "analytic";  // established by blow-up analysis, not computed here
    return rep;
}

std::vector<CriticalPointReport> all_critical_points(const Params& params, System system) {
    std::vector<CriticalPointReport> out;
    out.push_back(linearize_finite(params, system));
    for (const char* which : {"P1", "P1*", "P2", "P2*"})
        out.push_back(linearize_infinity(params, system, which));
    for (const char* which : {"P3", "P3*"})
        out.push_back(classify_nonhyperbolic(params, system, which));
    return out;
}

} // namespace critpoints
} // namespace phmap
