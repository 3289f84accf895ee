#pragma once

#include <string>
#include <vector>

#include "phmap/integrate.hpp"

namespace phmap {
namespace solutions {

// Oscillation structure of an oscillatory profile: refined interior critical radii,
// alternation labels, and amplitudes about pi/2.
struct OscillationReport {
    std::vector<double> critical_radii;
    std::vector<double> values;
    std::vector<std::string> kinds;       // "max" / "min"
    std::vector<double> amplitudes;       // |h(r_n) - pi/2|
    std::size_t n0 = 0;                   // amplitudes strictly decrease from here on
    std::size_t max_index = 0;            // index of the largest amplitude
};

// Measured asymptotics backing a taxonomy label.
struct Evidence {
    std::string limit0_kind;     // regular-origin, half-integer-center, multiple-of-pi,
                                 // derivative-blowup, unbounded, inconclusive
    double limit0_value = 0.0;
    std::string limitinf_kind;
    double limitinf_value = 0.0;
    bool monotone_increasing = false;
    int crit_count_backward = 0;
    int crit_count_forward = 0;
    double h_end_backward = 0.0;
    double h_end_forward = 0.0;
    std::string note;
};

struct SolutionClass {
    std::string label;
    Evidence evidence;
};

struct Alpha0 {
    double value;
    double p;
};

// Where a classified solution starts.
struct StartSpec {
    enum class Kind { origin_limit, planar } kind = Kind::origin_limit;
    double slope = 1.0;          // origin_limit: h ~ slope * r
    PlanarState state{0.0, 0.0}; // planar: (w, k) at r = 1
    BranchIndex branch = 0;

    static StartSpec origin(double slope_) {
        StartSpec s;
        s.kind = Kind::origin_limit;
        s.slope = slope_;
        return s;
    }
    static StartSpec planar(double w, double k, BranchIndex branch_ = 0) {
        StartSpec s;
        s.kind = Kind::planar;
        s.state = {w, k};
        s.branch = branch_;
        return s;
    }
};

struct MinimizerResult {
    RadialProfile profile;       // rescaled to (0, 1], h(1) = l
    double r_star = 0.0;         // rescaling radius of the canonical solution
    double energy = 0.0;         // int_0^1 r (h'^2 + sin^2 h / r^2)^{p/2} dr
    bool reflected_alternative = false;  // l = pi/2: pi - h is the mirror solution
    integrate::Trajectory trajectory;    // unrescaled canonical run up to r_star
};

struct AsymptoticCheckItem {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
};

struct AsymptoticChecks {
    std::vector<AsymptoticCheckItem> items;
    double observed_plane_slope_ratio = 0.0;  // w/k measured along the P2 manifold
    std::string note;
};

// The global solution fixed by its origin slope, sampled out to r_max.
// A refinement pass integrates again from r0/2 and checks profile stability.
RadialProfile canonical_global(const Params& params, double r_max, double slope = 1.0,
                               bool check_refinement = true);

// Dense canonical run for callers that need interpolation or events.
integrate::Trajectory canonical_trajectory(const Params& params, double r_max, double slope,
                                           const std::vector<integrate::EventSpec>& events = {},
                                           const integrate::IntegratorConfig* base = nullptr);

// Boundary-value solution via event rescaling of the canonical run.
MinimizerResult minimizer(const Params& params, int n_samples = 512);

// Independent discretized descent oracle for the same boundary-value problem.
RadialProfile variational_minimizer(const Params& params, int grid_n, double reg_eps = 1e-10);

// Discrete energy of a sampled profile (trapezoid on the samples).
double profile_energy(const RadialProfile& profile);

// Threshold slope separating capture by the origin from escape, from the saddle manifold.
Alpha0 alpha0(const Params& params);

OscillationReport oscillation_analysis(const RadialProfile& profile);

SolutionClass classify_solution(const Params& params, const StartSpec& start,
                                double horizon = 1e3);

AsymptoticChecks asymptotic_checks(const Params& params);

} // namespace solutions
} // namespace phmap
