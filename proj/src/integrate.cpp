#include "phmap/integrate.hpp"

#include <algorithm>
#include <cmath>

#include "phmap/critpoints.hpp"

namespace phmap {
namespace integrate {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Interpolation weights for the free 4th-order interpolant.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

System flow_system(SystemId id) {
    switch (id) {
    case SystemId::planar_forward:
    case SystemId::poincare_forward:
        return System::forward;
    default:
        return System::reversed;
    }
}

bool phase_family(SystemId id) {
    return id == SystemId::planar_forward || id == SystemId::planar_reversed ||
           id == SystemId::poincare_forward || id == SystemId::poincare_reversed;
}

Chart initial_chart(SystemId id) {
    switch (id) {
    case SystemId::radial: return Chart::radial;
    case SystemId::log_origin:
    case SystemId::log_infinity: return Chart::log;
    case SystemId::planar_forward:
    case SystemId::planar_reversed: return Chart::planar;
    default: return Chart::poincare;
    }
}

Eigen::Vector2d eval_seg(const Trajectory::Seg& seg, double t) {
    const double th = (t - seg.t0) / seg.h_dense;
    const double th1 = 1.0 - th;
    return seg.rc[0] +
           th * (seg.rc[1] + th1 * (seg.rc[2] + th * (seg.rc[3] + th1 * seg.rc[4])));
}

} // namespace

void IntegratorConfig::validate() const {
    if (!(rtol > 0.0) || !(atol > 0.0))
        throw invalid_input("integrator config: tolerances must be positive");
    if (!(switch_radius_in < switch_radius_out))
        throw invalid_input("integrator config: switch radii must satisfy in < out");
    if (!(equator_eps > 0.0) || max_steps <= 0)
        throw invalid_input("integrator config: bad equator_eps or max_steps");
}

double Trajectory::t_begin() const {
    if (samples.empty())
        throw insufficient_data("trajectory: empty");
    return samples.front().t;
}

double Trajectory::t_end() const {
    if (samples.empty())
        throw insufficient_data("trajectory: empty");
    return samples.back().t;
}

bool Trajectory::forward() const { return t_end() >= t_begin(); }

std::pair<Chart, Eigen::Vector2d> Trajectory::eval(double t) const {
    if (segs.empty()) {
        if (samples.size() == 1 && t == samples[0].t)
            return {samples[0].chart, samples[0].y};
        throw invalid_input("trajectory eval: no dense segments");
    }
    const double dir = segs.front().h >= 0.0 ? 1.0 : -1.0;
    const double lo = segs.front().t0;
    const double hi = segs.back().t0 + segs.back().h;
    if ((t - lo) * dir < -1e-12 * (1.0 + std::abs(lo)) ||
        (t - hi) * dir > 1e-12 * (1.0 + std::abs(hi)))
        throw invalid_input("trajectory eval: t outside integrated span");
    // last segment whose start is not past t
    std::size_t leftmost = 0, n = segs.size();
    std::size_t low = 0, high = n;
    while (low < high) {
        const std::size_t mid = (low + high) / 2;
        if ((segs[mid].t0 - t) * dir <= 1e-15 * (1.0 + std::abs(t)))
            low = mid + 1;
        else
            high = mid;
    }
    leftmost = (low == 0) ? 0 : low - 1;
    const auto& seg = segs[leftmost];
    return {seg.chart, eval_seg(seg, t)};
}

PlanarState Trajectory::eval_planar(double t) const {
    auto [chart, y] = eval(t);
    if (chart == Chart::planar)
        return {y[0], y[1]};
    if (chart == Chart::poincare)
        return transforms::poincare_to_planar({y[0], y[1]});
    throw invalid_input("trajectory eval_planar: not a phase-plane run");
}

namespace {

struct RhsContext {
    const Params& params;
    SystemId system;

    Eigen::Vector2d operator()(double t, const Eigen::Vector2d& y, Chart chart) const {
        switch (chart) {
        case Chart::radial:
            return model::rhs_radial(params, {t, y[0], y[1]});
        case Chart::log: {
            const Direction dir = (system == SystemId::log_origin)
                                      ? Direction::toward_origin
                                      : Direction::toward_infinity;
            return model::rhs_log(params, {t, y[0], y[1], dir});
        }
        case Chart::planar:
            return model::rhs_planar(params, {y[0], y[1]}, flow_system(system));
        case Chart::poincare:
            return model::rhs_poincare(params, {y[0], y[1]}, flow_system(system));
        }
        throw invalid_input("rhs: unknown chart");
    }
};

double event_value(const EventSpec& spec, const Params& params, double t,
                   const Eigen::Vector2d& y, Chart chart, BranchIndex branch,
                   SystemId system) {
    auto planar_view = [&]() -> PlanarState {
        if (chart == Chart::planar)
            return {y[0], y[1]};
        return transforms::poincare_to_planar({y[0], y[1]});
    };
    auto angle_view = [&]() -> double {
        switch (chart) {
        case Chart::radial:
        case Chart::log:
            return y[0];
        default: {
            const PlanarState s = planar_view();
            return (M_PI_2 - std::atan(s.w)) + branch * M_PI;
        }
        }
    };
    switch (spec.kind) {
    case EventKind::w_zero:
        switch (chart) {
        case Chart::radial:
        case Chart::log:
            return std::cos(y[0]);
        default:
            return planar_view().w;
        }
    case EventKind::k_zero:
        switch (chart) {
        case Chart::radial:
        case Chart::log:
            return y[1];
        default:
            return planar_view().k;
        }
    case EventKind::f_crosses_value:
    case EventKind::h_crosses_value:
        return angle_view() - spec.value;
    case EventKind::denominator_below: {
        double den;
        switch (chart) {
        case Chart::radial: {
            const double s = std::sin(y[0]);
            den = (params.p - 1.0) * y[1] * y[1] + s * s / (t * t);
            break;
        }
        case Chart::log: {
            const double s = std::sin(y[0]);
            den = (params.p - 1.0) * y[1] * y[1] + s * s;
            break;
        }
        default:
            den = 1.0;  // planar denominators never vanish
        }
        return den - spec.value;
    }
    case EventKind::radius_exceeds: {
        double radius;
        switch (chart) {
        case Chart::radial:
            radius = t;
            break;
        case Chart::log:
            radius = (system == SystemId::log_origin) ? std::exp(-t) : std::exp(t);
            break;
        case Chart::planar:
            radius = std::hypot(y[0], y[1]);
            break;
        default:
            radius = y[0] / (1.0 - std::min(y[0], 1.0 - 1e-16));
        }
        return radius - spec.value;
    }
    }
    throw invalid_input("event: unknown kind");
}

bool crossing_matches(const EventSpec& spec, double g0, double g1) {
    if (!(g0 * g1 < 0.0))
        return false;
    switch (spec.dir) {
    case CrossDir::rising: return g0 < 0.0 && g1 > 0.0;
    case CrossDir::falling: return g0 > 0.0 && g1 < 0.0;
    default: return true;
    }
}

} // namespace
} // namespace integrate

namespace integrate_detail {

using namespace integrate;

struct Stepper {
    const Params& params;
    SystemId system;
    const IntegratorConfig& cfg;
    const std::vector<EventSpec>& eventspecs;
    RhsContext rhs;
    Trajectory traj;

    double t;
    Eigen::Vector2d y;
    Chart chart;
    BranchIndex branch;
    double dir;  // +1 or -1
    Eigen::Vector2d f_cur;
    std::vector<double> g_prev;  // event values at current point

    Stepper(const Params& params_, SystemId system_, const StartState& start,
            const IntegratorConfig& cfg_, const std::vector<EventSpec>& events_)
        : params(params_), system(system_), cfg(cfg_), eventspecs(events_),
          rhs{params_, system_} {
        params.validate();
        cfg.validate();
        traj.params = params;
        traj.system = system;
        t = start.t;
        y = start.y;
        branch = start.branch;
        chart = initial_chart(system);
        dir = (cfg.t_max >= t) ? 1.0 : -1.0;
        if (cfg.t_max == t)
            throw invalid_input("integrate: t_max equals start time");
        f_cur = rhs(t, y, chart);
        traj.samples.push_back({t, y, chart, branch});
        g_prev.resize(eventspecs.size());
        for (std::size_t i = 0; i < eventspecs.size(); ++i)
            g_prev[i] = event_value(eventspecs[i], params, t, y, chart, branch, system);
    }

    double error_norm(const Eigen::Vector2d& err, const Eigen::Vector2d& y0,
                      const Eigen::Vector2d& y1) const {
        double acc = 0.0;
        for (int i = 0; i < 2; ++i) {
            const double sc = cfg.atol + cfg.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
            const double q = err[i] / sc;
            acc += q * q;
        }
        return std::sqrt(acc / 2.0);
    }

    double initial_step() const {
        if (cfg.first_step != 0.0)
            return std::abs(cfg.first_step) * dir;
        auto scale = [&](const Eigen::Vector2d& v) {
            double acc = 0.0;
            for (int i = 0; i < 2; ++i) {
                const double sc = cfg.atol + cfg.rtol * std::abs(y[i]);
                acc += (v[i] / sc) * (v[i] / sc);
            }
            return std::sqrt(acc / 2.0);
        };
        const double d0 = scale(y);
        const double d1 = scale(f_cur);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, std::abs(cfg.t_max - t));
        Eigen::Vector2d y1 = y + h0 * dir * f_cur;
        double d2 = 0.0;
        try {
            const Eigen::Vector2d f1 = rhs(t + h0 * dir, y1, chart);
            d2 = scale(f1 - f_cur) / h0;
        } catch (const numeric_error&) {
            d2 = 0.0;
        }
        double h1;
        if (std::max(d1, d2) <= 1e-15)
            h1 = std::max(1e-6, h0 * 1e-3);
        else
            h1 = std::pow(0.01 / std::max(d1, d2), 0.2);
        return std::min({100.0 * h0, h1, cfg.max_step, std::abs(cfg.t_max - t)}) * dir;
    }

    // One embedded step attempt from (t, y) with signed step h.
    bool attempt(double h, Eigen::Vector2d& y_new, Eigen::Vector2d& f_new, double& err,
                 std::array<Eigen::Vector2d, 7>& k) const {
        try {
            k[0] = f_cur;
            k[1] = rhs(t + c2 * h, y + h * (a21 * k[0]), chart);
            k[2] = rhs(t + c3 * h, y + h * (a31 * k[0] + a32 * k[1]), chart);
            k[3] = rhs(t + c4 * h, y + h * (a41 * k[0] + a42 * k[1] + a43 * k[2]), chart);
            k[4] = rhs(t + c5 * h,
                       y + h * (a51 * k[0] + a52 * k[1] + a53 * k[2] + a54 * k[3]), chart);
            k[5] = rhs(t + h,
                       y + h * (a61 * k[0] + a62 * k[1] + a63 * k[2] + a64 * k[3] + a65 * k[4]),
                       chart);
            y_new = y + h * (b1 * k[0] + b3 * k[2] + b4 * k[3] + b5 * k[4] + b6 * k[5]);
            f_new = rhs(t + h, y_new, chart);
            k[6] = f_new;
            const Eigen::Vector2d ev =
                h * (e1 * k[0] + e3 * k[2] + e4 * k[3] + e5 * k[4] + e6 * k[5] + e7 * k[6]);
            if (!y_new.allFinite() || !f_new.allFinite())
                return false;
            err = error_norm(ev, y, y_new);
            return true;
        } catch (const numeric_error&) {
            return false;
        }
    }

    Trajectory::Seg make_seg(double h, const Eigen::Vector2d& y_new,
                             const std::array<Eigen::Vector2d, 7>& k) const {
        Trajectory::Seg seg;
        seg.t0 = t;
        seg.h = h;
        seg.h_dense = h;
        seg.chart = chart;
        seg.branch = branch;
        const Eigen::Vector2d dy = y_new - y;
        seg.rc[0] = y;
        seg.rc[1] = dy;
        seg.rc[2] = h * k[0] - dy;
        seg.rc[3] = dy - h * k[6] - seg.rc[2];
        seg.rc[4] = h * (d1 * k[0] + d3 * k[2] + d4 * k[3] + d5 * k[4] + d6 * k[5] + d7 * k[6]);
        return seg;
    }

    double refine_event(const Trajectory::Seg& seg, const EventSpec& spec, double ta,
                        double tb, double ga, double gb) const {
        // Illinois variant of regula falsi on the dense output.
        double fa = ga, fb = gb;
        for (int it = 0; it < 80; ++it) {
            const double denom = fb - fa;
            double tm = (std::abs(denom) > 1e-300) ? tb - fb * (tb - ta) / denom
                                                   : 0.5 * (ta + tb);
            if (!((tm - ta) * (tb - tm) >= 0.0))
                tm = 0.5 * (ta + tb);
            const Eigen::Vector2d ym = eval_seg(seg, tm);
            const double fm =
                event_value(spec, params, tm, ym, seg.chart, seg.branch, system);
            if (fm == 0.0 || std::abs(tb - ta) < 1e-13 * (1.0 + std::abs(tm)))
                return tm;
            if (fa * fm < 0.0) {
                tb = tm;
                fb = fm;
                fa *= 0.5;  // Illinois damping
            } else {
                ta = tm;
                fa = fm;
                fb *= 0.5;
            }
            std::swap(fa, fb);
            std::swap(ta, tb);
        }
        return 0.5 * (ta + tb);
    }

    // Returns true if a terminal event truncated the step at t_cut.
    bool scan_events(const Trajectory::Seg& seg, double t_new, bool& terminal,
                     double& t_cut) {
        terminal = false;
        if (eventspecs.empty())
            return false;
        constexpr int nsub = 5;
        struct Hit { double t; std::size_t idx; };
        std::vector<Hit> hits;
        for (std::size_t i = 0; i < eventspecs.size(); ++i) {
            double ta = seg.t0;
            double ga = g_prev[i];
            for (int s = 1; s <= nsub; ++s) {
                const double tb = seg.t0 + seg.h * (static_cast<double>(s) / nsub);
                const Eigen::Vector2d yb = eval_seg(seg, tb);
                const double gb =
                    event_value(eventspecs[i], params, tb, yb, seg.chart, seg.branch, system);
                if (crossing_matches(eventspecs[i], ga, gb)) {
                    const double tr = refine_event(seg, eventspecs[i], ta, tb, ga, gb);
                    hits.push_back({tr, i});
                    if (!eventspecs[i].terminal) {
                        ta = tb;
                        ga = gb;
                        continue;
                    }
                    break;
                }
                ta = tb;
                ga = gb;
            }
        }
        std::sort(hits.begin(), hits.end(),
                  [&](const Hit& a, const Hit& b) { return (a.t - b.t) * dir < 0.0; });
        for (const Hit& hit : hits) {
            const Eigen::Vector2d yh = eval_seg(seg, hit.t);
            traj.events.push_back({hit.t, yh, seg.chart, hit.idx});
            if (eventspecs[hit.idx].terminal) {
                terminal = true;
                t_cut = hit.t;
                return true;
            }
        }
        // refresh cached event values at step end
        const Eigen::Vector2d ye = eval_seg(seg, t_new);
        for (std::size_t i = 0; i < eventspecs.size(); ++i)
            g_prev[i] = event_value(eventspecs[i], params, t_new, ye, seg.chart, seg.branch,
                                    system);
        return false;
    }

    void switch_chart(Chart to) {
        Eigen::Vector2d converted;
        if (to == Chart::poincare) {
            const PoincareState ps = transforms::planar_to_poincare({y[0], y[1]});
            converted = {ps.rho, ps.phi};
        } else {
            const PlanarState s = transforms::poincare_to_planar({y[0], y[1]});
            converted = {s.w, s.k};
        }
        traj.switches.push_back({t, chart, to, y, converted});
        chart = to;
        y = converted;
        f_cur = rhs(t, y, chart);
        for (std::size_t i = 0; i < eventspecs.size(); ++i)
            g_prev[i] = event_value(eventspecs[i], params, t, y, chart, branch, system);
    }

    Trajectory run() {
        double h = initial_step();
        bool last_rejected = false;
        long steps = 0;
        long consecutive_failures = 0;
        while (true) {
            if (steps++ >= cfg.max_steps) {
                traj.termination = TerminationReason::max_steps;
                traj.note = "step budget exhausted";
                break;
            }
            bool final_step = false;
            if ((t + h - cfg.t_max) * dir >= 0.0) {
                h = cfg.t_max - t;
                final_step = true;
            }
            if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(t))) {
                if (final_step) {
                    traj.termination = TerminationReason::reached_t_max;
                } else {
                    traj.termination = (consecutive_failures > 0)
                                           ? TerminationReason::singular_denominator
                                           : TerminationReason::step_underflow;
                    traj.note = (consecutive_failures > 0)
                                    ? "vector field became singular; returning partial trajectory"
                                    : "step size underflow";
                }
                break;
            }
            Eigen::Vector2d y_new, f_new;
            double err = 0.0;
            std::array<Eigen::Vector2d, 7> k;
            if (!attempt(h, y_new, f_new, err, k)) {
                ++consecutive_failures;
                h *= 0.5;
                final_step = false;
                continue;
            }
            if (err > 1.0) {
                consecutive_failures = 0;
                last_rejected = true;
                const double fac = std::max(0.2, 0.9 * std::pow(err, -0.2));
                h *= fac;
                continue;
            }
            consecutive_failures = 0;
            const double t_new = final_step ? cfg.t_max : t + h;
            Trajectory::Seg seg = make_seg(h, y_new, k);
            traj.segs.push_back(seg);

            bool terminal = false;
            double t_cut = t_new;
            if (scan_events(seg, t_new, terminal, t_cut)) {
                const Eigen::Vector2d yc = eval_seg(seg, t_cut);
                traj.segs.back().h = t_cut - seg.t0;
                traj.samples.push_back({t_cut, yc, chart, branch});
                traj.termination = TerminationReason::terminal_event;
                break;
            }

            const bool was_below_equator =
                chart == Chart::poincare && y[0] < 1.0 - cfg.equator_eps;
            t = t_new;
            y = y_new;
            f_cur = f_new;
            traj.samples.push_back({t, y, chart, branch});

            // stop on crossing INTO the shell, not when seeded inside it
            if (was_below_equator && y[0] >= 1.0 - cfg.equator_eps) {
                // refine the equator crossing within this segment
                double ta = seg.t0, tb = t_new;
                const double target = 1.0 - cfg.equator_eps;
                for (int it = 0; it < 80; ++it) {
                    const double tm = 0.5 * (ta + tb);
                    if (eval_seg(seg, tm)[0] >= target)
                        tb = tm;
                    else
                        ta = tm;
                    if (std::abs(tb - ta) < 1e-13 * (1.0 + std::abs(tm)))
                        break;
                }
                const Eigen::Vector2d yc = eval_seg(seg, tb);
                traj.segs.back().h = tb - seg.t0;
                traj.samples.back() = {tb, yc, chart, branch};
                traj.termination = TerminationReason::reached_infinity;
                traj.note = "trajectory reached the equator shell";
                break;
            }
            if (phase_family(system)) {
                if (chart == Chart::planar &&
                    std::hypot(y[0], y[1]) > cfg.switch_radius_out)
                    switch_chart(Chart::poincare);
                else if (chart == Chart::poincare && y[0] < 1.0 &&
                         y[0] / (1.0 - y[0]) < cfg.switch_radius_in)
                    switch_chart(Chart::planar);
            }

            if (final_step) {
                traj.termination = TerminationReason::reached_t_max;
                break;
            }
            double fac = (err == 0.0) ? 10.0 : 0.9 * std::pow(err, -0.2);
            fac = std::min(last_rejected ? 1.0 : 10.0, std::max(0.2, fac));
            last_rejected = false;
            h *= fac;
            if (std::abs(h) > cfg.max_step)
                h = cfg.max_step * dir;
        }
        return std::move(traj);
    }
};

} // namespace integrate_detail

namespace integrate {

Trajectory integrate(const Params& params, SystemId system, const StartState& start,
                     const IntegratorConfig& config, const std::vector<EventSpec>& events) {
    integrate_detail::Stepper stepper(params, system, start, config, events);
    return stepper.run();
}

Trajectory integrate_backward_from_saddle(const Params& params, SystemId system,
                                          const PoincareState& point,
                                          const Eigen::Vector2d& eigvec, double offset,
                                          const IntegratorConfig& config,
                                          const std::vector<EventSpec>& events) {
    params.validate();
    if (system != SystemId::poincare_forward && system != SystemId::poincare_reversed)
        throw invalid_input("saddle trace: system must be a compactified phase flow");
    if (!(offset > 0.0) || !eigvec.allFinite() || eigvec.norm() == 0.0)
        throw invalid_input("saddle trace: bad offset or eigenvector");
    const System flow = flow_system(system);
    const Eigen::Vector2d f0 =
        model::rhs_poincare(params, point, flow);
    if (f0.norm() > 1e-6)
        throw invalid_input("saddle trace: point is not critical");
    const Eigen::Matrix2d J = critpoints::numerical_jacobian(params, flow, point);
    const double tr = J.trace(), det = J(0, 0) * J(1, 1) - J(0, 1) * J(1, 0);
    if (!(det < 0.0) || tr * tr - 4.0 * det < 0.0)
        throw invalid_input("saddle trace: point is not a saddle");
    const Eigen::Vector2d v = eigvec.normalized();
    const double lambda = v.dot(J * v);
    // stable direction: the manifold is traced by running time backward
    const double tdir = (lambda < 0.0) ? -1.0 : 1.0;
    StartState start;
    start.t = 0.0;
    Eigen::Vector2d seed = Eigen::Vector2d(point.rho, point.phi) - offset * v;
    if (seed[0] > 1.0 || seed[0] >= point.rho + 0.5 * offset)
        seed = Eigen::Vector2d(point.rho, point.phi) + offset * v;
    if (seed[0] > 1.0)
        throw invalid_input("saddle trace: seed falls outside the chart");
    start.y = seed;
    IntegratorConfig cfg = config;
    const double span = (cfg.t_max != 0.0) ? std::abs(cfg.t_max) : 200.0;
    cfg.t_max = tdir * span;
    return integrate(params, system, start, cfg, events);
}

bool find_crossing(const Trajectory& traj,
                   const std::function<double(Chart, const Eigen::Vector2d&)>& fn,
                   double& t_out) {
    if (traj.samples.size() < 2)
        return false;
    double gp = fn(traj.samples.front().chart, traj.samples.front().y);
    for (std::size_t i = 1; i < traj.samples.size(); ++i) {
        const auto& s = traj.samples[i];
        const double g = fn(s.chart, s.y);
        if (gp * g < 0.0 && traj.samples[i - 1].chart == s.chart) {
            double ta = traj.samples[i - 1].t, tb = s.t;
            for (int it = 0; it < 200; ++it) {
                const double tm = 0.5 * (ta + tb);
                const auto [chart, ym] = traj.eval(tm);
                const double gm = fn(chart, ym);
                if (gp * gm <= 0.0)
                    tb = tm;
                else
                    ta = tm;
                if (std::abs(tb - ta) < 1e-13 * (1.0 + std::abs(tm)))
                    break;
            }
            t_out = 0.5 * (ta + tb);
            return true;
        }
        gp = g;
    }
    return false;
}

} // namespace integrate
} // namespace phmap
