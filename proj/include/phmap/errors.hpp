#pragma once

#include <stdexcept>
#include <string>

namespace phmap {

// Bad arguments caught before any numerics run (CLI exit code 2).
struct invalid_input : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numerical failure while a computation is in flight (CLI exit code 3).
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The quasilinear denominator fell below the breakdown guard.
struct singular_denominator : numeric_error {
    using numeric_error::numeric_error;
};

// A state left the domain of the requested chart.
struct out_of_chart : numeric_error {
    using numeric_error::numeric_error;
};

// A branch-dependent inverse was evaluated on a branch boundary.
struct branch_boundary : numeric_error {
    using numeric_error::numeric_error;
};

// Slope-ratio coordinates divide by a derivative that vanished.
struct turning_point : numeric_error {
    using numeric_error::numeric_error;
};

// Two computations that must agree (analytic vs numerical) did not.
struct consistency_failure : numeric_error {
    using numeric_error::numeric_error;
};

// An iterative method exhausted its budget without meeting tolerance.
struct convergence_failure : numeric_error {
    using numeric_error::numeric_error;
};

// A bisection or continuation scan ran past its horizon.
struct horizon_exceeded : numeric_error {
    using numeric_error::numeric_error;
};

// A result was requested from data too sparse to support it.
struct insufficient_data : numeric_error {
    using numeric_error::numeric_error;
};

// A requested event never fired on the computed trajectory (CLI exit code 4).
struct event_not_found : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace phmap
