#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "phmap/solutions.hpp"

using namespace phmap;
using namespace phmap::solutions;

namespace {
constexpr double kSqrt3Third = 1.5773502691896257;  // 1 + sqrt(3)/3
}

TEST_CASE("canonical run at p = 2 matches the closed form") {
    const RadialProfile prof = canonical_global({2.0, {}}, 50.0, 2.0);
    double sup = 0.0;
    for (const auto& pt : prof.points)
        sup = std::max(sup, std::abs(pt.h - 2.0 * std::atan(pt.r)));
    CHECK(sup < 1e-8);
    CHECK(prof.points.front().r < 1e-5);
    CHECK(prof.points.back().r == doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("canonical run rejects bad gauges") {
    CHECK_THROWS_AS(canonical_global({2.0, {}}, 50.0, 0.0), invalid_input);
    CHECK_THROWS_AS(canonical_global({2.0, {}}, 50.0, -1.0), invalid_input);
    CHECK_THROWS_AS(canonical_global({2.0, {}}, 1e-7, 1.0), invalid_input);
}

TEST_CASE("canonical trajectory forwards events") {
    std::vector<integrate::EventSpec> ev{
        {integrate::EventKind::h_crosses_value, M_PI_2, integrate::CrossDir::rising, true}};
    const auto tr = canonical_trajectory({2.0, {}}, 100.0, 2.0, ev);
    REQUIRE(tr.events.size() == 1);
    CHECK(tr.events[0].t == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("oscillation structure of the slowly spiraling profile") {
    const Params prm{kSqrt3Third, {}};
    const RadialProfile prof = canonical_global(prm, 1e3, 1e5);
    const OscillationReport rep = oscillation_analysis(prof);
    REQUIRE(rep.critical_radii.size() >= 5);
    const double radii[] = {9.79595185e-05, 2.73262028e-03, 6.97654316e-02,
                            1.74711953, 43.5445118};
    const double amps[] = {0.53291928, 0.26053160, 0.13097572, 0.06626400, 0.03357783};
    for (int i = 0; i < 5; ++i) {
        CHECK(rep.critical_radii[i] == doctest::Approx(radii[i]).epsilon(2e-2));
        CHECK(rep.amplitudes[i] == doctest::Approx(amps[i]).epsilon(1e-3));
        CHECK(rep.kinds[i] == (i % 2 == 0 ? "max" : "min"));
        // alternation about pi/2
        const double dev = rep.values[i] - M_PI_2;
        CHECK((i % 2 == 0 ? dev > 0.0 : dev < 0.0));
    }
    CHECK(rep.n0 == 0);
    CHECK(rep.max_index == 0);
    for (std::size_t i = rep.n0 + 1; i < rep.amplitudes.size(); ++i)
        CHECK(rep.amplitudes[i] < rep.amplitudes[i - 1]);
    CHECK(std::abs(prof.points.back().h - M_PI_2) < 0.05);
}

TEST_CASE("oscillation analysis needs turning points") {
    const RadialProfile prof = canonical_global({3.0, {}}, 100.0, 1.0);
    CHECK_THROWS_AS(oscillation_analysis(prof), insufficient_data);
}

TEST_CASE("boundary-value profiles against recorded values") {
    {
        const MinimizerResult res = minimizer({2.0, M_PI_2});
        CHECK(res.r_star == doctest::Approx(2.0).epsilon(1e-6));
        CHECK(res.energy == doctest::Approx(2.0).epsilon(1e-6));
        CHECK(res.reflected_alternative);
        CHECK(res.profile.points.back().h == doctest::Approx(M_PI_2).epsilon(1e-10));
    }
    {
        const MinimizerResult res = minimizer({1.5, 0.3});
        CHECK(res.r_star == doctest::Approx(0.30342632).epsilon(1e-6));
        CHECK(res.energy == doctest::Approx(0.1373948275).epsilon(1e-6));
        CHECK_FALSE(res.reflected_alternative);
    }
    {
        const MinimizerResult res = minimizer({2.5, 0.7});
        CHECK(res.r_star == doctest::Approx(0.72051314).epsilon(1e-6));
        CHECK(res.energy == doctest::Approx(0.4634717880).epsilon(1e-6));
    }
    {
        const MinimizerResult res = minimizer({1.5, M_PI_2});
        CHECK(res.r_star == doctest::Approx(2.42216686).epsilon(1e-6));
        CHECK(res.energy == doctest::Approx(1.3825214617).epsilon(1e-6));
    }
}

TEST_CASE("boundary-value profiles are monotone increasing") {
    const MinimizerResult res = minimizer({1.5, 0.3});
    for (std::size_t i = 1; i < res.profile.points.size(); ++i) {
        CHECK(res.profile.points[i].h >= res.profile.points[i - 1].h - 1e-12);
        CHECK(res.profile.points[i].h > 0.0);
    }
}

TEST_CASE("discretized descent agrees with the shooting profile") {
    const Params prm{1.5, 0.3};
    const MinimizerResult res = minimizer(prm);
    const RadialProfile var = variational_minimizer(prm, 500);
    double sup = 0.0;
    for (const auto& q : var.points) {
        const auto y = res.trajectory.eval(res.r_star * q.r).second;
        sup = std::max(sup, std::abs(y[0] - q.h));
    }
    CHECK(sup < 1e-2);
    CHECK(profile_energy(var) == doctest::Approx(res.energy).epsilon(1e-4));
    CHECK(var.points.back().h == doctest::Approx(0.3).epsilon(1e-12));
    for (std::size_t i = 1; i < var.points.size(); ++i)
        CHECK(var.points[i].h >= var.points[i - 1].h - 1e-10);
}

TEST_CASE("trapezoid profile energy is near the quadrature energy") {
    const MinimizerResult res = minimizer({2.0, M_PI_2});
    CHECK(profile_energy(res.profile) == doctest::Approx(2.0).epsilon(1e-2));
}

TEST_CASE("threshold slope against recorded values") {
    CHECK(alpha0({1.5, {}}).value == doctest::Approx(2.4722290601050214).epsilon(1e-6));
    CHECK(alpha0({kSqrt3Third, {}}).value
          == doctest::Approx(2.076467397625714).epsilon(1e-6));
    CHECK_THROWS_AS(alpha0({2.0, {}}), invalid_input);
    CHECK_THROWS_AS(alpha0({2.5, {}}), invalid_input);
}

TEST_CASE("taxonomy labels across the exponent range") {
    CHECK(classify_solution({3.0, {}}, StartSpec::origin(1.0)).label
          == "increasing-unbounded");
    CHECK(classify_solution({2.1, {}}, StartSpec::planar(0.0, -0.1)).label
          == "half-integer-start");
    CHECK(classify_solution({kSqrt3Third, {}}, StartSpec::origin(1e5), 1e5).label
          == "minimizer-type");
    CHECK(classify_solution({kSqrt3Third, {}}, StartSpec::planar(0.0, -3.1147013970229057),
                            1e5).label
          == "oscillatory-with-blowup-at-0");
    CHECK(classify_solution({kSqrt3Third, {}}, StartSpec::planar(0.0, -200.0)).label
          == "unbounded");
    CHECK(classify_solution({2.5, {}}, StartSpec::planar(0.0, -50.0)).label
          == "doubly-unbounded");
}

TEST_CASE("taxonomy evidence carries the measurements") {
    const SolutionClass cls =
        classify_solution({2.1, {}}, StartSpec::planar(0.0, -0.1));
    CHECK(cls.evidence.limit0_kind == "half-integer-center");
    CHECK(cls.evidence.limit0_value == doctest::Approx(M_PI_2));
    CHECK(cls.evidence.crit_count_backward >= 3);
    CHECK(cls.evidence.h_end_backward == doctest::Approx(1.52376).epsilon(1e-3));
}

TEST_CASE("asymptotic checks pass on both sides of p = 2") {
    for (double p : {1.5, 2.5}) {
        const AsymptoticChecks chk = asymptotic_checks({p, {}});
        REQUIRE(chk.items.size() >= 3);
        for (const auto& item : chk.items)
            CHECK(item.pass);
    }
    const AsymptoticChecks low = asymptotic_checks({1.5, {}});
    CHECK(low.observed_plane_slope_ratio == doctest::Approx(0.5).epsilon(1e-5));
}
