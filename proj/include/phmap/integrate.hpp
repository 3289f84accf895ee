#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "phmap/transforms.hpp"

namespace phmap {
namespace integrate_detail {
struct Stepper;
}

namespace integrate {

// Which equations to integrate. The planar and poincare families share one flow
// and may hand states back and forth at the hysteresis radii.
enum class SystemId {
    radial,            // h(r) over r
    log_origin,        // f(t) over t = -ln r
    log_infinity,      // f(t) over t = +ln r
    planar_forward,
    planar_reversed,
    poincare_forward,
    poincare_reversed,
};

enum class Chart { radial, log, planar, poincare };

enum class CrossDir { rising, falling, any };

enum class EventKind {
    w_zero,
    k_zero,
    f_crosses_value,
    denominator_below,
    radius_exceeds,
    h_crosses_value,
};

struct EventSpec {
    EventKind kind;
    double value = 0.0;
    CrossDir dir = CrossDir::any;
    bool terminal = false;
};

enum class TerminationReason {
    reached_t_max,
    terminal_event,
    singular_denominator,
    step_underflow,
    max_steps,
    reached_infinity,
};

struct IntegratorConfig {
    double rtol = 1e-10;
    double atol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    double t_max = 0.0;                // integration target; may be below the start time
    double switch_radius_out = 1e3;    // planar -> poincare
    double switch_radius_in = 5e2;     // poincare -> planar
    double equator_eps = 1e-6;         // poincare runs stop at rho >= 1 - equator_eps
    long max_steps = 2000000;
    double first_step = 0.0;           // 0 = choose automatically

    void validate() const;
};

struct StartState {
    double t = 0.0;
    Eigen::Vector2d y{0.0, 0.0};
    BranchIndex branch = 0;
};

struct Sample {
    double t;
    Eigen::Vector2d y;
    Chart chart;
    BranchIndex branch;
};

struct EventHit {
    double t;
    Eigen::Vector2d y;
    Chart chart;
    std::size_t event_index;
};

struct ChartSwitch {
    double t;
    Chart from;
    Chart to;
    Eigen::Vector2d y_from;
    Eigen::Vector2d y_to;
};

// Dense trajectory: accepted samples, refined event hits, interpolation segments.
class Trajectory {
  public:
    Params params{1.0, {}};
    SystemId system = SystemId::radial;
    std::vector<Sample> samples;
    std::vector<EventHit> events;
    std::vector<ChartSwitch> switches;
    TerminationReason termination = TerminationReason::reached_t_max;
    std::string note;

    struct Seg {
        double t0;
        double h;       // valid span (shrunk when an event truncates the step)
        double h_dense; // step size the interpolation coefficients were built for
        Chart chart;
        BranchIndex branch;
        std::array<Eigen::Vector2d, 5> rc;
    };
    std::vector<Seg> segs;

    double t_begin() const;
    double t_end() const;
    bool forward() const;

    // Interpolated state at time t, in the chart the integrator was using there.
    std::pair<Chart, Eigen::Vector2d> eval(double t) const;

    // Planar view of phase-plane runs (converts compactified samples back).
    PlanarState eval_planar(double t) const;

    friend struct phmap::integrate_detail::Stepper;
};

Trajectory integrate(const Params& params, SystemId system, const StartState& start,
                     const IntegratorConfig& config, const std::vector<EventSpec>& events = {});

// Seeds offset along an eigenvector of an equator saddle and follows the invariant
// manifold into the plane (backward in time for a stable direction).
Trajectory integrate_backward_from_saddle(const Params& params, SystemId system,
                                          const PoincareState& point,
                                          const Eigen::Vector2d& eigvec, double offset,
                                          const IntegratorConfig& config,
                                          const std::vector<EventSpec>& events = {});

// First time in a trajectory where fn (chart-aware) changes sign; refined by bisection
// on the dense output. Returns false if no crossing exists.
bool find_crossing(const Trajectory& traj,
                   const std::function<double(Chart, const Eigen::Vector2d&)>& fn,
                   double& t_out);

} // namespace integrate
} // namespace phmap
