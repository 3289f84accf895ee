#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "phmap/model.hpp"

using namespace phmap;

namespace {

// p = 2 closed form with origin slope a: h(r) = 2 atan(a r / 2)
RadialPoint exact_p2(double a, double r) {
    const double u = 0.5 * a * r;
    return {r, 2.0 * std::atan(u), a / (1.0 + u * u)};
}

double exact_p2_ddh(double a, double r) {
    const double u = 0.5 * a * r;
    const double d = 1.0 + u * u;
    return -a * a * u / (d * d);
}

} // namespace

TEST_CASE("params validation") {
    CHECK_THROWS_AS((Params{1.0, {}}.validate()), invalid_input);
    CHECK_THROWS_AS((Params{0.5, {}}.validate()), invalid_input);
    CHECK_THROWS_AS((Params{std::nan(""), {}}.validate()), invalid_input);
    CHECK_THROWS_AS((Params{1.5, 0.0}.validate()), invalid_input);
    CHECK_THROWS_AS((Params{1.5, 2.0}.validate()), invalid_input);
    CHECK_NOTHROW((Params{1.5, M_PI_2}.validate()));
    CHECK_NOTHROW((Params{3.0, {}}.validate()));
}

TEST_CASE("radial residual vanishes on the p = 2 closed form") {
    const Params prm{2.0, {}};
    for (double a : {0.3, 1.0, 2.0})
        for (double r : {0.05, 0.7, 1.0, 13.0}) {
            const RadialPoint pt = exact_p2(a, r);
            CHECK(std::abs(model::residual_ode(prm, pt, exact_p2_ddh(a, r))) < 1e-12);
            CHECK(model::explicit_second_derivative(prm, pt)
                  == doctest::Approx(exact_p2_ddh(a, r)).epsilon(1e-10));
        }
}

TEST_CASE("explicit second derivative closes the residual for generic p") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> up(1.05, 3.9), ur(0.1, 5.0), uh(0.2, 2.9),
        ud(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const Params prm{up(rng), {}};
        const RadialPoint pt{ur(rng), uh(rng), ud(rng)};
        double ddh;
        try {
            ddh = model::explicit_second_derivative(prm, pt);
        } catch (const singular_denominator&) {
            continue;
        }
        const double scale = 1.0 + std::abs(ddh);
        CHECK(std::abs(model::residual_ode(prm, pt, ddh)) < 1e-9 * scale);
    }
}

TEST_CASE("second derivative throws at the quasilinear breakdown") {
    const Params prm{1.5, {}};
    // dh = 0 and h at a multiple of pi kills both denominator terms
    CHECK_THROWS_AS(model::explicit_second_derivative(prm, {1.0, 0.0, 0.0}),
                    singular_denominator);
    CHECK_THROWS_AS(model::explicit_second_derivative(prm, {2.0, M_PI, 0.0}),
                    singular_denominator);
}

TEST_CASE("log-time residual vanishes on the p = 2 closed forms") {
    const Params prm{2.0, {}};
    // toward the origin: f(t) = 2 atan(e^{-t}); toward infinity: f(t) = 2 atan(e^{t})
    for (double t : {-2.0, -0.3, 0.0, 1.1, 3.0}) {
        {
            const double e = std::exp(-t);
            const LogState s{t, 2.0 * std::atan(e), -2.0 * e / (1.0 + e * e),
                             Direction::toward_origin};
            const double ddf = 2.0 * e * (1.0 - e * e) / ((1.0 + e * e) * (1.0 + e * e));
            CHECK(std::abs(model::residual_log(prm, s, ddf)) < 1e-12);
            CHECK(model::rhs_log(prm, s)[1] == doctest::Approx(ddf).epsilon(1e-10));
        }
        {
            const double e = std::exp(t);
            const LogState s{t, 2.0 * std::atan(e), 2.0 * e / (1.0 + e * e),
                             Direction::toward_infinity};
            const double ddf = -2.0 * e * (e * e - 1.0) / ((1.0 + e * e) * (1.0 + e * e));
            CHECK(std::abs(model::residual_log(prm, s, ddf)) < 1e-12);
            CHECK(model::rhs_log(prm, s)[1] == doctest::Approx(ddf).epsilon(1e-10));
        }
    }
}

TEST_CASE("log-time field agrees with the radial field under t = -ln r") {
    std::mt19937 rng(101);
    std::uniform_real_distribution<double> up(1.1, 3.5), ur(0.2, 4.0), uh(0.3, 2.8),
        ud(-2.0, 2.0);
    for (int i = 0; i < 100; ++i) {
        const Params prm{up(rng), {}};
        const double r = ur(rng), h = uh(rng), dh = ud(rng);
        double ddh;
        try {
            ddh = model::explicit_second_derivative(prm, {r, h, dh});
        } catch (const singular_denominator&) {
            continue;
        }
        // f(t) = h(e^{-t}), f' = -r h', f'' = r h' + r^2 h''
        const LogState s{-std::log(r), h, -r * dh, Direction::toward_origin};
        const double ddf = r * dh + r * r * ddh;
        CHECK(model::rhs_log(prm, s)[1] == doctest::Approx(ddf).epsilon(1e-8));
        // and f(t) = h(e^{t}): f' = r h', f'' = r h' + r^2 h''
        const LogState si{std::log(r), h, r * dh, Direction::toward_infinity};
        CHECK(model::rhs_log(prm, si)[1] == doctest::Approx(ddf).epsilon(1e-8));
    }
}

TEST_CASE("the two planar fields are time reversals of each other") {
    std::mt19937 rng(55);
    std::uniform_real_distribution<double> up(1.1, 3.8), u(-4.0, 4.0);
    for (int i = 0; i < 200; ++i) {
        const Params prm{up(rng), {}};
        const double w = u(rng), k = u(rng);
        const Eigen::Vector2d rev = model::rhs_planar(prm, {w, k}, System::reversed);
        const Eigen::Vector2d fwd = model::rhs_planar(prm, {w, -k}, System::forward);
        CHECK(rev[0] == doctest::Approx(-fwd[0]).epsilon(1e-12));
        CHECK(rev[1] == doctest::Approx(fwd[1]).epsilon(1e-12));
    }
}

TEST_CASE("planar field follows from the log-time field on branch 0") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> up(1.1, 3.5), uf(0.2, 2.9), ud(-2.0, 2.0);
    for (int i = 0; i < 100; ++i) {
        const Params prm{up(rng), {}};
        const double f = uf(rng), df = ud(rng);
        const double s = std::sin(f), c = std::cos(f);
        const double w = c / s, k = -df / (s * s);
        // forward system lives in t = -ln r
        const LogState ls{0.0, f, df, Direction::toward_origin};
        const double ddf = model::rhs_log(prm, ls)[1];
        const double dk = -ddf / (s * s) + 2.0 * df * df * c / (s * s * s);
        const Eigen::Vector2d v = model::rhs_planar(prm, {w, k}, System::forward);
        CHECK(v[0] == doctest::Approx(k).epsilon(1e-12));
        CHECK(v[1] == doctest::Approx(dk).epsilon(1e-8));
    }
}

TEST_CASE("compactified field is parallel to the pushed-forward planar field") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> up(1.1, 3.5), u(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const Params prm{up(rng), {}};
        const double w = u(rng), k = u(rng);
        const double R = std::hypot(w, k);
        if (R < 1e-3)
            continue;
        for (System sys : {System::forward, System::reversed}) {
            const Eigen::Vector2d pl = model::rhs_planar(prm, {w, k}, sys);
            // rho = R/(1+R), phi = atan2(k, w)
            const double dR = (w * pl[0] + k * pl[1]) / R;
            const double drho = dR / ((1.0 + R) * (1.0 + R));
            const double dphi = (w * pl[1] - k * pl[0]) / (R * R);
            const double rho = R / (1.0 + R), phi = std::atan2(k, w);
            const Eigen::Vector2d pc = model::rhs_poincare(prm, {rho, phi}, sys);
            const double cross = drho * pc[1] - dphi * pc[0];
            const double dot = drho * pc[0] + dphi * pc[1];
            const double scale = std::hypot(drho, dphi) * pc.norm();
            if (scale < 1e-14)
                continue;
            CHECK(std::abs(cross) < 1e-7 * scale);
            CHECK(dot > 0.0);
        }
    }
}

TEST_CASE("compactified field is finite on the closed disk") {
    const Params prm{1.7, {}};
    for (System sys : {System::forward, System::reversed})
        for (double rho : {0.0, 0.5, 0.999, 1.0})
            for (double phi : {0.0, 0.4, M_PI_2, M_PI, 4.0, 6.2}) {
                // the equator points straight above and below the origin are
                // genuine chart singularities
                if (rho == 1.0 && std::abs(std::cos(phi)) < 1e-9)
                    continue;
                const Eigen::Vector2d v = model::rhs_poincare(prm, {rho, phi}, sys);
                CHECK(std::isfinite(v[0]));
                CHECK(std::isfinite(v[1]));
            }
    CHECK_THROWS_AS(model::rhs_poincare(prm, {1.0, M_PI_2}, System::forward),
                    singular_denominator);
}

TEST_CASE("equator restriction of the compactified field") {
    // on rho = 1 the radial component vanishes identically
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> up(1.1, 3.5), uphi(0.05, 2.0 * M_PI);
    for (int i = 0; i < 100; ++i) {
        const Params prm{up(rng), {}};
        const Eigen::Vector2d v =
            model::rhs_poincare(prm, {1.0, uphi(rng)}, System::forward);
        CHECK(std::abs(v[0]) < 1e-12);
    }
}

TEST_CASE("slope-ratio function: fixed point at g = 1 with derivative 2(p-1)") {
    for (double p : {1.2, 1.5, 1.9, 2.5, 3.0}) {
        const Params prm{p, {}};
        // F(w, 1) -> p as w -> infinity; the correction decays like 1/w^2
        CHECK(model::slope_ratio_F(prm, 1e6, 1.0) == doctest::Approx(p).epsilon(1e-10));
        CHECK(model::slope_ratio_F(prm, 1e8, 1.0) == doctest::Approx(p).epsilon(1e-14));
        const double e2 = std::abs(model::slope_ratio_F(prm, 1e2, 1.0) - p);
        const double e3 = std::abs(model::slope_ratio_F(prm, 1e3, 1.0) - p);
        CHECK(e3 < 0.02 * e2); // two decades per decade of w
        // analytic g-derivative against central differences
        for (double g : {0.3, 1.0, 2.5}) {
            const double h = 1e-6;
            const double fd = (model::slope_ratio_F(prm, 1e6, g + h)
                               - model::slope_ratio_F(prm, 1e6, g - h)) / (2.0 * h);
            CHECK(model::slope_ratio_dFdg(prm, 1e6, g)
                  == doctest::Approx(fd).epsilon(1e-6));
        }
        // large-w limit of the derivative at the fixed point
        CHECK(model::slope_ratio_dFdg(prm, 1e8, 1.0)
              == doctest::Approx(2.0 * (p - 1.0)).epsilon(1e-7));
    }
}

TEST_CASE("radial energy density") {
    const Params p2{2.0, {}};
    // dh = 0, h = pi/2: r (1/r^2)^{p/2} = 1/r at p = 2
    CHECK(model::lagrangian(p2, {2.0, M_PI_2, 0.0}) == doctest::Approx(0.5).epsilon(1e-14));
    const Params p3{3.0, {}};
    CHECK(model::lagrangian(p3, {2.0, M_PI_2, 0.0})
          == doctest::Approx(2.0 * std::pow(0.25, 1.5)).epsilon(1e-14));
    CHECK(model::lagrangian(p2, {1.0, 0.0, 2.0}) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("phase-plane energy diagnostics") {
    const Params prm{1.5, {}};
    const EnergyDiag d = model::energy_diag(prm, {0.0, 1.0});
    CHECK(d.E == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(d.dEdt == doctest::Approx(-4.0 / 3.0).epsilon(1e-12));
    CHECK(d.Gsign == doctest::Approx(0.5).epsilon(1e-15));
    // dEdt carries the opposite sign of G on the reversed flow whenever k != 0
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0), up(1.1, 1.95);
    for (int i = 0; i < 200; ++i) {
        const Params q{up(rng), {}};
        const double w = u(rng), k = u(rng);
        if (std::abs(k) < 1e-6)
            continue;
        const EnergyDiag e = model::energy_diag(q, {w, k});
        if (e.Gsign > 1e-12)
            CHECK(e.dEdt <= 1e-12);
        if (e.Gsign < -1e-12)
            CHECK(e.dEdt >= -1e-12);
    }
}
