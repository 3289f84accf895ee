#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "phmap/model.hpp"

namespace phmap {
namespace critpoints {

// Linearization summary of one critical point, finite or on the equator.
struct CriticalPointReport {
    System system = System::forward;
    std::string name;                 // "O", "P1", "P1*", "P2", "P2*", "P3", "P3*"
    bool at_infinity = false;
    double angle = 0.0;               // equator polar angle when at_infinity
    std::optional<Eigen::Matrix2d> matrix;              // closed-form linearization
    std::optional<Eigen::Matrix2d> numerical_jacobian;  // chart Jacobian cross-check
    std::optional<std::array<std::complex<double>, 2>> eigenvalues;
    std::string classification;       // stable-node/focus, unstable-node/focus, saddle,
                                      // center, nonhyperbolic-elliptic
    std::string basis;                // "analytic" or "computed"
};

// arccos((p-1)/sqrt(p^2-2p+2)), the non-diagonal saddle angle.
double theta2(double p);

// Degree-5 trigonometric balance whose zeros are the equator critical angles.
double angle_equation_residual(const Params& params, System system, double theta);

// The six closed-form equator angles, sorted, each checked against the angle equation.
std::vector<double> infinity_angles(const Params& params, System system);

// Angles whose direction satisfies sin(theta) cos(theta) >= 0.
std::vector<double> interesting_angles(const std::vector<double>& angles);

// Equator angle of a named point (P1, P1*, P2, P2*, P3, P3*).
double named_angle(const Params& params, System system, const std::string& which);

// Finite-differences Jacobian of the compactified field; one-sided in rho on the equator.
Eigen::Matrix2d numerical_jacobian(const Params& params, System system,
                                   const PoincareState& at);

CriticalPointReport linearize_finite(const Params& params, System system);
CriticalPointReport linearize_infinity(const Params& params, System system,
                                       const std::string& which);
CriticalPointReport classify_nonhyperbolic(const Params& params, System system,
                                           const std::string& which);

// Origin plus all six equator points.
std::vector<CriticalPointReport> all_critical_points(const Params& params, System system);

} // namespace critpoints
} // namespace phmap
