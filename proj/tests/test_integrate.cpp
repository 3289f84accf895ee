#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "phmap/integrate.hpp"

using namespace phmap;
using namespace phmap::integrate;

namespace {

const Params p2{2.0, {}};

double exact_h(double r) { return 2.0 * std::atan(r); }     // p = 2, origin slope 2
double exact_dh(double r) { return 2.0 / (1.0 + r * r); }

Trajectory run_exact_p2(double r0, double r1, double rtol = 1e-10,
                        const std::vector<EventSpec>& ev = {}) {
    StartState st;
    st.t = r0;
    st.y = {exact_h(r0), exact_dh(r0)};
    IntegratorConfig cfg;
    cfg.rtol = rtol;
    cfg.atol = rtol * 1e-2;
    cfg.t_max = r1;
    return phmap::integrate::integrate(p2, SystemId::radial, st, cfg, ev);
}

} // namespace

TEST_CASE("radial integration reproduces the p = 2 closed form") {
    const Trajectory tr = run_exact_p2(0.01, 10.0);
    CHECK(tr.termination == TerminationReason::reached_t_max);
    CHECK(tr.t_end() == doctest::Approx(10.0).epsilon(1e-15));
    const auto& last = tr.samples.back();
    CHECK(std::abs(last.y[0] - exact_h(10.0)) < 1e-9);
    CHECK(std::abs(last.y[1] - exact_dh(10.0)) < 1e-9);
}

TEST_CASE("dense output is accurate between accepted steps") {
    const Trajectory tr = run_exact_p2(0.01, 10.0);
    for (int i = 0; i <= 400; ++i) {
        const double r = 0.01 * std::pow(10.0 / 0.01, i / 400.0);
        const auto [chart, y] = tr.eval(r);
        CHECK(chart == Chart::radial);
        CHECK(std::abs(y[0] - exact_h(r)) < 1e-8);
    }
    CHECK_THROWS_AS(tr.eval(0.001), invalid_input);
    CHECK_THROWS_AS(tr.eval(11.0), invalid_input);
}

TEST_CASE("tightening rtol tightens the endpoint") {
    const double e6 = std::abs(run_exact_p2(0.01, 10.0, 1e-6).samples.back().y[0]
                               - exact_h(10.0));
    const double e10 = std::abs(run_exact_p2(0.01, 10.0, 1e-10).samples.back().y[0]
                                - exact_h(10.0));
    CHECK(e10 < e6);
    CHECK(e10 < 1e-9);
}

TEST_CASE("backward radial integration") {
    StartState st;
    st.t = 1.0;
    st.y = {exact_h(1.0), exact_dh(1.0)};
    IntegratorConfig cfg;
    cfg.t_max = 0.01;
    const Trajectory tr = phmap::integrate::integrate(p2, SystemId::radial, st, cfg);
    CHECK_FALSE(tr.forward());
    CHECK(tr.samples.back().t == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(std::abs(tr.samples.back().y[0] - exact_h(0.01)) < 1e-9);
    // dense eval inside a backward run
    const auto [chart, y] = tr.eval(0.3);
    CHECK(std::abs(y[0] - exact_h(0.3)) < 1e-8);
}

TEST_CASE("log-time charts reproduce the p = 2 closed forms") {
    {
        StartState st;
        st.y = {M_PI_2, -1.0};  // f(t) = 2 atan(e^{-t}) at t = 0
        IntegratorConfig cfg;
        cfg.t_max = 3.0;
        const Trajectory tr = phmap::integrate::integrate(p2, SystemId::log_origin, st, cfg);
        CHECK(std::abs(tr.samples.back().y[0] - 2.0 * std::atan(std::exp(-3.0))) < 1e-9);
    }
    {
        StartState st;
        st.y = {M_PI_2, 1.0};  // f(t) = 2 atan(e^{t}) at t = 0
        IntegratorConfig cfg;
        cfg.t_max = 3.0;
        const Trajectory tr = phmap::integrate::integrate(p2, SystemId::log_infinity, st, cfg);
        CHECK(std::abs(tr.samples.back().y[0] - 2.0 * std::atan(std::exp(3.0))) < 1e-9);
    }
}

TEST_CASE("terminal rising event stops the run at the crossing") {
    std::vector<EventSpec> ev{
        {EventKind::h_crosses_value, M_PI_2, CrossDir::rising, true}};
    const Trajectory tr = run_exact_p2(0.01, 10.0, 1e-10, ev);
    CHECK(tr.termination == TerminationReason::terminal_event);
    REQUIRE(tr.events.size() == 1);
    // h = pi/2 happens exactly at r = 1 on this solution
    CHECK(std::abs(tr.events[0].t - 1.0) < 1e-8);
    CHECK(std::abs(tr.events[0].y[0] - M_PI_2) < 1e-10);
    CHECK(tr.samples.back().t == doctest::Approx(tr.events[0].t).epsilon(1e-14));
}

TEST_CASE("a falling filter ignores a rising crossing") {
    std::vector<EventSpec> ev{
        {EventKind::h_crosses_value, M_PI_2, CrossDir::falling, true}};
    const Trajectory tr = run_exact_p2(0.01, 10.0, 1e-10, ev);
    CHECK(tr.termination == TerminationReason::reached_t_max);
    CHECK(tr.events.empty());
}

TEST_CASE("f crossing on a log run lands at the analytic time") {
    StartState st;
    st.y = {M_PI_2, -1.0};
    IntegratorConfig cfg;
    cfg.t_max = 6.0;
    std::vector<EventSpec> ev{{EventKind::f_crosses_value, 0.5, CrossDir::falling, true}};
    const Trajectory tr = phmap::integrate::integrate(p2, SystemId::log_origin, st, cfg, ev);
    REQUIRE(tr.events.size() == 1);
    // 2 atan(e^{-t}) = 1/2  =>  t = -ln tan(1/4)
    CHECK(std::abs(tr.events[0].t + std::log(std::tan(0.25))) < 1e-8);
}

TEST_CASE("non-terminal events are all recorded") {
    // subthreshold start spirals into the origin of the reversed plane
    const Params prm{1.5, {}};
    StartState st;
    st.y = {0.3, -1.0};
    IntegratorConfig cfg;
    cfg.t_max = 25.0;
    std::vector<EventSpec> ev{{EventKind::w_zero, 0.0, CrossDir::any, false}};
    const Trajectory tr = phmap::integrate::integrate(prm, SystemId::planar_reversed, st, cfg, ev);
    CHECK(tr.termination == TerminationReason::reached_t_max);
    CHECK(tr.events.size() >= 3);
    for (std::size_t i = 0; i < tr.events.size(); ++i) {
        CHECK(std::abs(tr.events[i].y[0]) < 1e-9);
        if (i)
            CHECK(tr.events[i].t > tr.events[i - 1].t);
    }
}

TEST_CASE("radius event fires before the chart switch radius") {
    const Params prm{1.5773502691896257, {}};
    StartState st;
    st.y = {0.0, -200.0};
    IntegratorConfig cfg;
    cfg.t_max = 10.0;
    std::vector<EventSpec> ev{{EventKind::radius_exceeds, 500.0, CrossDir::rising, true}};
    const Trajectory tr = phmap::integrate::integrate(prm, SystemId::planar_reversed, st, cfg, ev);
    CHECK(tr.termination == TerminationReason::terminal_event);
    REQUIRE(tr.events.size() == 1);
    CHECK(std::hypot(tr.events[0].y[0], tr.events[0].y[1])
          == doctest::Approx(500.0).epsilon(1e-8));
    CHECK(tr.switches.empty());
}

TEST_CASE("planar runs switch to the disk chart and stop at the equator") {
    const Params prm{1.5773502691896257, {}};
    StartState st;
    st.y = {0.0, -200.0};
    IntegratorConfig cfg;
    cfg.t_max = 10.0;
    const Trajectory tr = phmap::integrate::integrate(prm, SystemId::planar_reversed, st, cfg);
    CHECK(tr.termination == TerminationReason::reached_infinity);
    REQUIRE(!tr.switches.empty());
    const ChartSwitch& sw = tr.switches.front();
    CHECK(sw.from == Chart::planar);
    CHECK(sw.to == Chart::poincare);
    // the handoff preserves the state
    const PoincareState mapped =
        transforms::planar_to_poincare({sw.y_from[0], sw.y_from[1]});
    CHECK(mapped.rho == doctest::Approx(sw.y_to[0]).epsilon(1e-12));
    CHECK(mapped.phi == doctest::Approx(sw.y_to[1]).epsilon(1e-12));
    // final sample sits in the equator shell
    const auto& last = tr.samples.back();
    CHECK(last.chart == Chart::poincare);
    CHECK(last.y[0] >= 1.0 - 2e-6);
}

TEST_CASE("find_crossing refines a chart-aware sign change") {
    const Trajectory tr = run_exact_p2(0.01, 10.0);
    double t_out = 0.0;
    const bool ok = find_crossing(
        tr, [](Chart, const Eigen::Vector2d& y) { return y[0] - M_PI_2; }, t_out);
    CHECK(ok);
    CHECK(std::abs(t_out - 1.0) < 1e-8);
    double t_none = 0.0;
    CHECK_FALSE(find_crossing(
        tr, [](Chart, const Eigen::Vector2d& y) { return y[0] - 10.0; }, t_none));
}

TEST_CASE("saddle manifold trace reaches the recorded threshold slope") {
    const Params prm{1.5, {}};
    const double t2 = std::acos(0.5 / std::sqrt(1.25));  // theta2 at p = 1.5
    IntegratorConfig cfg;
    cfg.rtol = 1e-12;
    cfg.atol = 1e-14;
    cfg.t_max = 200.0;
    std::vector<EventSpec> ev{{EventKind::w_zero, 0.0, CrossDir::any, true}};
    const Trajectory tr = integrate_backward_from_saddle(
        prm, SystemId::poincare_reversed, {1.0, M_PI + t2}, {1.0, 0.0}, 1e-8, cfg, ev);
    CHECK(tr.termination == TerminationReason::terminal_event);
    REQUIRE(tr.events.size() == 1);
    CHECK(std::abs(tr.events[0].y[0]) < 1e-10);
    CHECK(tr.events[0].y[1] == doctest::Approx(-2.4722290601050214).epsilon(1e-6));
    // interpolation at the refined event time must agree with the stored hit
    const PlanarState at = tr.eval_planar(tr.events[0].t);
    CHECK(std::abs(at.w - tr.events[0].y[0]) < 1e-12);
    CHECK(std::abs(at.k - tr.events[0].y[1]) < 1e-10);
}

TEST_CASE("saddle trace rejects a non-critical seed") {
    const Params prm{1.5, {}};
    IntegratorConfig cfg;
    cfg.t_max = 10.0;
    CHECK_THROWS_AS(integrate_backward_from_saddle(prm, SystemId::poincare_reversed,
                                                   {1.0, 1.0}, {1.0, 0.0}, 1e-8, cfg),
                    invalid_input);
}

TEST_CASE("step budget is honored") {
    StartState st;
    st.t = 0.01;
    st.y = {exact_h(0.01), exact_dh(0.01)};
    IntegratorConfig cfg;
    cfg.t_max = 1e6;
    cfg.max_steps = 5;
    const Trajectory tr = phmap::integrate::integrate(p2, SystemId::radial, st, cfg);
    CHECK(tr.termination == TerminationReason::max_steps);
    CHECK(tr.samples.size() <= 7);
}

TEST_CASE("config validation") {
    IntegratorConfig cfg;
    cfg.rtol = -1.0;
    CHECK_THROWS_AS(cfg.validate(), invalid_input);
    IntegratorConfig cfg2;
    cfg2.switch_radius_in = 2e3;
    CHECK_THROWS_AS(cfg2.validate(), invalid_input);
    IntegratorConfig cfg3;
    cfg3.max_steps = 0;
    CHECK_THROWS_AS(cfg3.validate(), invalid_input);
}
