#include "phmap/solutions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "phmap/critpoints.hpp"
#include "phmap/errors.hpp"
#include "phmap/model.hpp"

namespace phmap {
namespace solutions {
namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double simpson_rec(const std::function<double(double)>& f, double a, double m, double b,
                   double fa, double fm, double fb, double whole, double tol, int depth) {
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
    double m = 0.5 * (a + b);
    double fa = f(a);
    double fm = f(m);
    double fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, m, b, fa, fm, fb, whole, tol, 48);
}

RadialProfile profile_from_traj(const integrate::Trajectory& traj) {
    RadialProfile prof;
    prof.params = traj.params;
    prof.points.reserve(traj.samples.size());
    for (const auto& s : traj.samples)
        prof.points.push_back({s.t, s.y[0], s.y[1]});
    if (!traj.forward())
        std::reverse(prof.points.begin(), prof.points.end());
    // drop the rare duplicate radius left by event refinement at a sample boundary
    std::vector<RadialPoint> clean;
    clean.reserve(prof.points.size());
    for (const auto& q : prof.points)
        if (clean.empty() || q.r > clean.back().r)
            clean.push_back(q);
    prof.points = std::move(clean);
    return prof;
}

integrate::Trajectory run_radial(const Params& params, double r0, double h0, double dh0,
                                 integrate::IntegratorConfig cfg,
                                 const std::vector<integrate::EventSpec>& events) {
    integrate::StartState st;
    st.t = r0;
    st.y = Eigen::Vector2d(h0, dh0);
    return integrate::integrate(params, integrate::SystemId::radial, st, cfg, events);
}

const char* reason_name(integrate::TerminationReason r) {
    switch (r) {
        case integrate::TerminationReason::reached_t_max: return "reached_t_max";
        case integrate::TerminationReason::terminal_event: return "terminal_event";
        case integrate::TerminationReason::singular_denominator: return "singular_denominator";
        case integrate::TerminationReason::step_underflow: return "step_underflow";
        case integrate::TerminationReason::max_steps: return "max_steps";
        case integrate::TerminationReason::reached_infinity: return "reached_infinity";
    }
    return "unknown";
}

} // namespace

integrate::Trajectory canonical_trajectory(const Params& params, double r_max, double slope,
                                           const std::vector<integrate::EventSpec>& events,
                                           const integrate::IntegratorConfig* base) {
    params.validate();
    if (!(slope > 0.0) || !std::isfinite(slope))
        throw invalid_input("origin slope must be positive and finite");
    if (!(r_max > 0.0) || !std::isfinite(r_max))
        throw invalid_input("r_max must be positive and finite");
    double r0 = 1e-6 / slope;
    if (r0 >= 0.5 * r_max)
        throw invalid_input("r_max = " + num(r_max) + " is inside the seeding radius " + num(r0));
    integrate::IntegratorConfig cfg = base ? *base : integrate::IntegratorConfig{};
    cfg.t_max = r_max;
    return run_radial(params, r0, slope * r0, slope, cfg, events);
}

RadialProfile canonical_global(const Params& params, double r_max, double slope,
                               bool check_refinement) {
    auto traj = canonical_trajectory(params, r_max, slope);
    if (traj.termination != integrate::TerminationReason::reached_t_max)
        throw numeric_error(std::string("global run stopped early: ") +
                            reason_name(traj.termination));
    if (check_refinement) {
        double r0 = 1e-6 / slope;
        integrate::IntegratorConfig cfg;
        cfg.t_max = r_max;
        auto traj2 = run_radial(params, 0.5 * r0, 0.5 * slope * r0, slope, cfg, {});
        double lo = std::sqrt(r0 * r_max);
        double worst = 0.0;
        for (int i = 0; i < 7; ++i) {
            double r = lo * std::pow(r_max / lo, i / 6.0);
            double h1 = traj.eval(r).second[0];
            double h2 = traj2.eval(r).second[0];
            worst = std::max(worst, std::abs(h1 - h2) / (1.0 + std::abs(h1)));
        }
        if (worst > 1e-8)
            throw consistency_failure("halving the start radius moved the profile by " +
                                      num(worst));
    }
    return profile_from_traj(traj);
}

MinimizerResult minimizer(const Params& params, int n_samples) {
    params.validate();
    if (!params.l)
        throw invalid_input("boundary value l is required");
    if (n_samples < 16)
        throw invalid_input("n_samples must be at least 16");
    double l = *params.l;
    double r0 = std::min(1e-6, 1e-3 * l);

    integrate::IntegratorConfig cfg;
    cfg.t_max = 1e6;
    std::vector<integrate::EventSpec> ev{
        {integrate::EventKind::h_crosses_value, l, integrate::CrossDir::rising, true}};
    auto traj = run_radial(params, r0, r0, 1.0, cfg, ev);
    if (traj.termination != integrate::TerminationReason::terminal_event || traj.events.empty())
        throw event_not_found("profile never reaches h = " + num(l) +
                              " before r = 1e6 (stopped: " + reason_name(traj.termination) + ")");
    double r_star = traj.events.front().t;
    for (const auto& s : traj.samples)
        if (s.y[1] < -1e-12)
            throw consistency_failure("profile not increasing below the boundary radius");

    MinimizerResult out;
    out.r_star = r_star;
    out.reflected_alternative = std::abs(l - 0.5 * kPi) < 1e-12;
    out.profile.params = params;
    double a = r0 / r_star;
    double la = std::log(a);
    out.profile.points.reserve(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        double u = la * (1.0 - i / (n_samples - 1.0));
        double rr = std::exp(u);
        auto st = traj.eval(r_star * rr).second;
        out.profile.points.push_back({rr, st[0], r_star * st[1]});
    }
    out.energy = adaptive_simpson(
        [&](double u) {
            double rr = std::exp(u);
            auto st = traj.eval(r_star * rr).second;
            return model::lagrangian(params, {rr, st[0], r_star * st[1]}) * rr;
        },
        la, 0.0, 1e-12);
    double h_first = out.profile.points.front().h;
    if (std::abs(h_first) < 0.1) {
        double s_eff = h_first / a;
        out.energy += std::pow(2.0 * s_eff * s_eff, 0.5 * params.p) * 0.5 * a * a;
    }
    out.trajectory = std::move(traj);
    return out;
}

double profile_energy(const RadialProfile& profile) {
    const auto& pts = profile.points;
    if (pts.size() < 2)
        throw insufficient_data("profile has fewer than 2 samples");
    double e = 0.0;
    double prev = model::lagrangian(profile.params, pts[0]);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        double cur = model::lagrangian(profile.params, pts[i]);
        e += 0.5 * (prev + cur) * (pts[i].r - pts[i - 1].r);
        prev = cur;
    }
    if (std::abs(pts.front().h) < 0.5) {
        double s_eff = pts.front().h / pts.front().r;
        e += std::pow(2.0 * s_eff * s_eff, 0.5 * profile.params.p) * 0.5 * pts.front().r *
             pts.front().r;
    }
    return e;
}

namespace {

// pool-adjacent-violators step of the monotone projection
std::vector<double> pav_nondecreasing(const std::vector<double>& v) {
    std::vector<double> val;
    std::vector<int> cnt;
    val.reserve(v.size());
    cnt.reserve(v.size());
    for (double x : v) {
        val.push_back(x);
        cnt.push_back(1);
        while (val.size() >= 2 && val[val.size() - 2] > val.back()) {
            double m = (val[val.size() - 2] * cnt[cnt.size() - 2] + val.back() * cnt.back()) /
                       (cnt[cnt.size() - 2] + cnt.back());
            val.pop_back();
            int c = cnt.back();
            cnt.pop_back();
            val.back() = m;
            cnt.back() += c;
        }
    }
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < val.size(); ++i)
        out.insert(out.end(), cnt[i], val[i]);
    return out;
}

struct VarGrid {
    double p;
    double l;
    double reg;
    int n;
    double dr;

    double energy(const std::vector<double>& x) const {
        double e = 0.0;
        for (int i = 0; i < n; ++i) {
            double rm = (i + 0.5) * dr;
            double s = (x[i + 1] - x[i]) / dr;
            double hm = 0.5 * (x[i] + x[i + 1]);
            double sh = std::sin(hm);
            double phi = s * s + sh * sh / (rm * rm) + reg;
            e += rm * std::pow(phi, 0.5 * p) * dr;
        }
        return e;
    }

    void grad_hess(const std::vector<double>& x, std::vector<double>& g,
                   std::vector<double>& diag, std::vector<double>& off) const {
        g.assign(n + 1, 0.0);
        diag.assign(n + 1, 0.0);
        off.assign(n, 0.0);
        double q = 0.5 * p - 1.0;
        for (int i = 0; i < n; ++i) {
            double rm = (i + 0.5) * dr;
            double s = (x[i + 1] - x[i]) / dr;
            double hm = 0.5 * (x[i] + x[i + 1]);
            double sh = std::sin(hm);
            double ch = std::cos(hm);
            double smc = sh * ch;
            double phi = s * s + sh * sh / (rm * rm) + reg;
            double pq = std::pow(phi, q);
            double pq1 = q != 0.0 ? std::pow(phi, q - 1.0) : 1.0 / phi;
            double Es = p * rm * dr * s * pq;
            double Eh = p * dr * smc * pq / rm;
            double Ess = p * rm * dr * pq1 * (phi + 2.0 * q * s * s);
            double Esh = 2.0 * p * q * dr * s * smc * pq1 / rm;
            double Ehh = p * dr / rm *
                         (std::cos(2.0 * hm) * pq + 2.0 * q * smc * smc * pq1 / (rm * rm));
            g[i] += -Es / dr + 0.5 * Eh;
            g[i + 1] += Es / dr + 0.5 * Eh;
            double a2 = 1.0 / (dr * dr);
            diag[i] += Ess * a2 - Esh / dr + 0.25 * Ehh;
            diag[i + 1] += Ess * a2 + Esh / dr + 0.25 * Ehh;
            off[i] += -Ess * a2 + 0.25 * Ehh;
        }
    }

    std::vector<double> project(std::vector<double> x) const {
        x[0] = 0.0;
        x[n] = l;
        x = pav_nondecreasing(x);
        for (double& v : x)
            v = std::clamp(v, 0.0, l);
        x[0] = 0.0;
        x[n] = l;
        return x;
    }
};

// tridiagonal solve on the interior nodes; false on a bad pivot
bool thomas_solve(std::vector<double> b, std::vector<double> c, std::vector<double> d,
                  std::vector<double>& out) {
    std::size_t m = b.size();
    for (std::size_t i = 1; i < m; ++i) {
        if (std::abs(b[i - 1]) < 1e-300)
            return false;
        double w = c[i - 1] / b[i - 1];
        b[i] -= w * c[i - 1];
        d[i] -= w * d[i - 1];
    }
    if (std::abs(b[m - 1]) < 1e-300)
        return false;
    out.assign(m, 0.0);
    out[m - 1] = d[m - 1] / b[m - 1];
    for (std::size_t i = m - 1; i-- > 0;)
        out[i] = (d[i] - c[i] * out[i + 1]) / b[i];
    return true;
}

} // namespace

RadialProfile variational_minimizer(const Params& params, int grid_n, double reg_eps) {
    params.validate();
    if (!params.l)
        throw invalid_input("boundary value l is required");
    if (grid_n < 8)
        throw invalid_input("grid_n must be at least 8");
    if (!(reg_eps >= 0.0) || !std::isfinite(reg_eps))
        throw invalid_input("reg_eps must be finite and nonnegative");

    VarGrid grid{params.p, *params.l, reg_eps, grid_n, 1.0 / grid_n};
    std::vector<double> x(grid_n + 1);
    for (int j = 0; j <= grid_n; ++j)
        x[j] = grid.l * j * grid.dr;
    double e = grid.energy(x);

    std::vector<double> g, diag, off;
    double lam = 0.0;
    int consecutive_fails = 0;
    bool converged = false;
    double pg_norm = 0.0;
    for (int iter = 0; iter < 200 && !converged; ++iter) {
        grid.grad_hess(x, g, diag, off);
        std::vector<double> shifted(x.size());
        for (std::size_t j = 0; j < x.size(); ++j)
            shifted[j] = x[j] - g[j];
        auto proj = grid.project(shifted);
        pg_norm = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j)
            pg_norm = std::max(pg_norm, std::abs(x[j] - proj[j]));
        if (pg_norm < 1e-8) {
            converged = true;
            break;
        }

        std::vector<double> b(diag.begin() + 1, diag.end() - 1);
        for (double& v : b)
            v += lam;
        std::vector<double> c(off.begin() + 1, off.end() - 1);
        std::vector<double> rhs(g.begin() + 1, g.end() - 1);
        for (double& v : rhs)
            v = -v;
        std::vector<double> d_int;
        if (!thomas_solve(b, c, rhs, d_int)) {
            lam = std::max(1e-8, lam * 10.0);
            if (++consecutive_fails > 12)
                throw convergence_failure("descent stalled: singular Newton system");
            continue;
        }
        std::vector<double> d(x.size(), 0.0);
        for (int j = 1; j < grid_n; ++j)
            d[j] = d_int[j - 1];

        bool accepted = false;
        double alpha = 1.0;
        for (int ls = 0; ls < 30; ++ls, alpha *= 0.5) {
            std::vector<double> cand(x.size());
            for (std::size_t j = 0; j < x.size(); ++j)
                cand[j] = x[j] + alpha * d[j];
            cand = grid.project(cand);
            double ec = grid.energy(cand);
            double gdot = 0.0;
            for (std::size_t j = 0; j < x.size(); ++j)
                gdot += g[j] * (cand[j] - x[j]);
            if (ec <= e + 1e-4 * gdot + 1e-14 * std::abs(e)) {
                x = std::move(cand);
                e = ec;
                accepted = true;
                break;
            }
        }
        if (accepted) {
            consecutive_fails = 0;
            if (alpha == 1.0)
                lam = lam < 1e-12 ? 0.0 : lam / 3.0;
        } else {
            lam = std::max(1e-6, lam * 10.0);
            if (++consecutive_fails > 12)
                throw convergence_failure("descent stalled: no acceptable step, |pg| = " +
                                          num(pg_norm));
        }
    }
    if (!converged)
        throw convergence_failure("projected gradient still " + num(pg_norm) +
                                  " after the iteration budget");

    RadialProfile prof;
    prof.params = params;
    prof.points.reserve(grid_n);
    for (int j = 1; j <= grid_n; ++j) {
        double r = j * grid.dr;
        double dh;
        if (j < grid_n)
            dh = (x[j + 1] - x[j - 1]) / (2.0 * grid.dr);
        else
            dh = (3.0 * x[j] - 4.0 * x[j - 1] + x[j - 2]) / (2.0 * grid.dr);
        prof.points.push_back({r, x[j], dh});
    }
    return prof;
}

Alpha0 alpha0(const Params& params) {
    params.validate();
    if (params.p >= 2.0)
        throw invalid_input("threshold slope is defined for 1 < p < 2");
    PoincareState saddle{1.0, kPi + critpoints::theta2(params.p)};
    Eigen::Vector2d v(1.0, 0.0);
    auto run = [&](double offset, double rtol) {
        integrate::IntegratorConfig cfg;
        cfg.rtol = rtol;
        cfg.atol = rtol * 1e-2;
        cfg.t_max = 200.0;
        std::vector<integrate::EventSpec> ev{
            {integrate::EventKind::w_zero, 0.0, integrate::CrossDir::any, true}};
        auto traj = integrate::integrate_backward_from_saddle(
            params, integrate::SystemId::poincare_reversed, saddle, v, offset, cfg, ev);
        if (traj.events.empty())
            throw horizon_exceeded("manifold trace never crosses w = 0 within the horizon");
        return -traj.eval_planar(traj.events.front().t).k;
    };
    double a1 = run(1e-8, 1e-12);
    double a2 = run(5e-9, 5e-13);
    if (std::abs(a1 - a2) > 1e-6 * std::max(1.0, std::abs(a2)))
        throw convergence_failure("threshold estimates disagree: " + num(a1) + " vs " + num(a2));
    return {a2, params.p};
}

namespace {

double lagrange3(const RadialPoint& a, const RadialPoint& b, const RadialPoint& c, double r) {
    double la = (r - b.r) * (r - c.r) / ((a.r - b.r) * (a.r - c.r));
    double lb = (r - a.r) * (r - c.r) / ((b.r - a.r) * (b.r - c.r));
    double lc = (r - a.r) * (r - b.r) / ((c.r - a.r) * (c.r - b.r));
    return la * a.h + lb * b.h + lc * c.h;
}

struct Crit {
    double r;
    double v;
    bool is_max;
};

std::vector<Crit> find_crits(const std::vector<RadialPoint>& pts) {
    std::vector<Crit> out;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double d0 = pts[i].dh;
        double d1 = pts[i + 1].dh;
        if (d0 * d1 >= 0.0)
            continue;
        double r = pts[i].r - d0 * (pts[i + 1].r - pts[i].r) / (d1 - d0);
        std::size_t j0 = i == 0 ? 0 : i - 1;
        if (j0 + 2 >= pts.size())
            j0 = pts.size() - 3;
        double v = lagrange3(pts[j0], pts[j0 + 1], pts[j0 + 2], r);
        out.push_back({r, v, d0 > 0.0});
    }
    return out;
}

} // namespace

OscillationReport oscillation_analysis(const RadialProfile& profile) {
    profile.validate();
    const auto& pts = profile.points;
    double p = profile.params.p;
    OscillationReport rep;
    for (const auto& c : find_crits(pts)) {
        rep.critical_radii.push_back(c.r);
        rep.values.push_back(c.v);
        rep.kinds.push_back(c.is_max ? "max" : "min");
        rep.amplitudes.push_back(std::abs(c.v - 0.5 * kPi));
    }
    std::size_t m = rep.amplitudes.size();
    if (m < 3)
        throw insufficient_data("found " + std::to_string(m) +
                                " interior critical radii; need at least 3");

    std::size_t dec = m - 1;
    while (dec > 0 && rep.amplitudes[dec - 1] > rep.amplitudes[dec])
        --dec;

    // earliest sample index after which the escape indicator stays positive
    std::size_t persist = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double sh = std::sin(pts[i].h);
        double G = 1.0;
        if (std::abs(sh) >= 1e-9) {
            double w = std::cos(pts[i].h) / sh;
            double k = -pts[i].r * pts[i].dh / (sh * sh);
            G = (2.0 - p) * (1.0 + w * w) - 2.0 * (p - 1.0) * w * k;
        }
        if (G <= 0.0)
            persist = i + 1;
    }
    std::size_t gidx = 0;
    if (persist >= pts.size()) {
        gidx = m - 1;
    } else {
        double r_persist = pts[persist].r;
        while (gidx < m && rep.critical_radii[gidx] < r_persist)
            ++gidx;
    }
    rep.n0 = std::min(m - 1, std::max(dec, gidx));
    rep.max_index =
        std::max_element(rep.amplitudes.begin(), rep.amplitudes.end()) - rep.amplitudes.begin();
    return rep;
}

namespace {

struct EndInfo {
    std::string kind = "inconclusive";
    double value = 0.0;
    std::string note;
};

// pts ascending in r; the examined end is the front (origin side) or the back
EndInfo analyze_end(const std::vector<RadialPoint>& pts, bool origin_side) {
    EndInfo out;
    if (pts.size() < 4) {
        out.note = "too few samples";
        return out;
    }
    double r_edge = origin_side ? pts.front().r : pts.back().r;
    double h_edge = origin_side ? pts.front().h : pts.back().h;
    out.value = h_edge;

    auto window = [&](double decades) {
        std::vector<RadialPoint> win;
        double lim = origin_side ? r_edge * std::pow(10.0, decades)
                                 : r_edge / std::pow(10.0, decades);
        for (const auto& q : pts)
            if (origin_side ? q.r <= lim : q.r >= lim)
                win.push_back(q);
        return win;
    };

    auto win = window(1.0);
    for (const auto& q : win) {
        if (std::abs(q.h) > 10.0 * kPi) {
            out.kind = "unbounded";
            out.value = h_edge;
            return out;
        }
    }
    if (win.size() >= 4) {
        double mean = 0.0;
        for (const auto& q : win)
            mean += q.h;
        mean /= win.size();
        long mh = std::lround(mean / kPi - 0.5);
        double ch = (2.0 * mh + 1.0) * 0.5 * kPi;
        double dev_half = 0.0;
        long mi = std::lround(mean / kPi);
        double ci = mi * kPi;
        double dev_int = 0.0;
        for (const auto& q : win) {
            dev_half = std::max(dev_half, std::abs(q.h - ch));
            dev_int = std::max(dev_int, std::abs(q.h - ci));
        }
        if (dev_half < 1e-3) {
            out.kind = "half-integer-center";
            out.value = ch;
            out.note = "sustained within 1e-3";
            return out;
        }
        if (dev_int < 1e-3) {
            if (origin_side) {
                double rdh = std::abs(pts.front().r * pts.front().dh);
                out.kind = rdh < 0.1 ? "regular-origin" : "derivative-blowup";
            } else {
                out.kind = "multiple-of-pi";
            }
            out.value = ci;
            return out;
        }
    }

    // slow spiral: settle for a decaying alternating envelope about a half-integer level
    auto wide = window(5.0);
    auto crits = find_crits(wide);
    if (crits.size() >= 3) {
        double cm = 0.0;
        for (const auto& c : crits)
            cm += c.v;
        cm /= crits.size();
        long mh = std::lround(cm / kPi - 0.5);
        double ch = (2.0 * mh + 1.0) * 0.5 * kPi;
        bool ok = true;
        for (std::size_t i = 0; i < crits.size(); ++i) {
            if (std::abs(crits[i].v - ch) > 1.3)
                ok = false;
            if (i > 0 && crits[i].is_max == crits[i - 1].is_max)
                ok = false;
        }
        if (ok) {
            for (std::size_t i = 0; i + 1 < crits.size(); ++i) {
                double a0 = std::abs(crits[i].v - ch);
                double a1 = std::abs(crits[i + 1].v - ch);
                bool shrinking_toward_limit = origin_side ? a0 <= a1 * (1.0 + 1e-9) + 1e-12
                                                          : a1 <= a0 * (1.0 + 1e-9) + 1e-12;
                if (!shrinking_toward_limit)
                    ok = false;
            }
        }
        if (ok) {
            out.kind = "half-integer-center";
            out.value = ch;
            out.note = "oscillation envelope, " + std::to_string(crits.size()) + " turning points";
            return out;
        }
    }
    out.kind = "inconclusive";
    return out;
}

int count_sign_changes(const std::vector<RadialPoint>& pts) {
    int n = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        if (pts[i].dh * pts[i + 1].dh < 0.0)
            ++n;
    return n;
}

} // namespace

SolutionClass classify_solution(const Params& params, const StartSpec& start, double horizon) {
    params.validate();
    if (!(horizon > 1.0) || !std::isfinite(horizon))
        throw invalid_input("horizon must exceed 1");

    integrate::IntegratorConfig cfg;
    cfg.t_max = horizon;
    // runs stop once far outside the oscillation range; detectors only need |h| > 10 pi
    std::vector<integrate::EventSpec> guards{
        {integrate::EventKind::h_crosses_value, 10.0 * kPi + 1.0, integrate::CrossDir::any, true},
        {integrate::EventKind::h_crosses_value, -10.0 * kPi - 1.0, integrate::CrossDir::any,
         true}};

    SolutionClass out;
    Evidence& ev = out.evidence;
    std::vector<RadialPoint> pts_b;
    std::vector<RadialPoint> pts_f;
    EndInfo info0;

    if (start.kind == StartSpec::Kind::origin_limit) {
        if (start.slope == 0.0 || !std::isfinite(start.slope))
            throw invalid_input("origin slope must be nonzero and finite");
        double r0 = 1e-6 / std::abs(start.slope);
        if (r0 >= 0.01 * horizon)
            throw invalid_input("slope too small for the horizon: seeding radius " + num(r0));
        auto traj = run_radial(params, r0, start.slope * r0, start.slope, cfg, guards);
        pts_f = profile_from_traj(traj).points;
        if (traj.termination != integrate::TerminationReason::reached_t_max &&
            traj.termination != integrate::TerminationReason::terminal_event)
            ev.note += std::string("forward run stopped: ") + reason_name(traj.termination) + "; ";
        info0.kind = "regular-origin";
        info0.value = 0.0;
        ev.h_end_backward = start.slope * r0;
    } else {
        LogState ls =
            transforms::planar_to_log(start.state, start.branch, Direction::toward_infinity, 0.0);
        double h1 = ls.f;
        double dh1 = ls.df;  // t = ln r, so df = r dh = dh at r = 1
        auto fwd = run_radial(params, 1.0, h1, dh1, cfg, guards);
        integrate::IntegratorConfig cfg_b = cfg;
        cfg_b.t_max = 1e-6;
        auto bwd = run_radial(params, 1.0, h1, dh1, cfg_b, guards);
        pts_f = profile_from_traj(fwd).points;
        pts_b = profile_from_traj(bwd).points;
        if (fwd.termination != integrate::TerminationReason::reached_t_max &&
            fwd.termination != integrate::TerminationReason::terminal_event)
            ev.note += std::string("forward run stopped: ") + reason_name(fwd.termination) + "; ";
        if (bwd.termination != integrate::TerminationReason::reached_t_max &&
            bwd.termination != integrate::TerminationReason::terminal_event)
            ev.note += std::string("backward run stopped: ") + reason_name(bwd.termination) + "; ";
        info0 = analyze_end(pts_b, true);
        ev.h_end_backward = pts_b.empty() ? h1 : pts_b.front().h;
    }

    EndInfo infoinf = analyze_end(pts_f, false);
    ev.h_end_forward = pts_f.empty() ? 0.0 : pts_f.back().h;
    ev.limit0_kind = info0.kind;
    ev.limit0_value = info0.value;
    ev.limitinf_kind = infoinf.kind;
    ev.limitinf_value = infoinf.value;
    ev.crit_count_backward = count_sign_changes(pts_b);
    ev.crit_count_forward = count_sign_changes(pts_f);
    bool mono = true;
    for (const auto& q : pts_b)
        if (q.dh < -1e-12)
            mono = false;
    for (const auto& q : pts_f)
        if (q.dh < -1e-12)
            mono = false;
    ev.monotone_increasing = mono;
    if (!info0.note.empty())
        ev.note += "origin side: " + info0.note + "; ";
    if (!infoinf.note.empty())
        ev.note += "far side: " + infoinf.note + "; ";

    const std::string& k0 = ev.limit0_kind;
    const std::string& ki = ev.limitinf_kind;
    bool blow0 = k0 == "unbounded" || k0 == "derivative-blowup";
    if (std::abs(params.p - 2.0) < 1e-12) {
        out.label = "undetermined";
        ev.note += "p = 2 sits between the two label families; ";
    } else if (params.p < 2.0) {
        if (k0 == "regular-origin" && ki == "half-integer-center")
            out.label = "minimizer-type";
        else if (blow0 && ki == "half-integer-center")
            out.label = "oscillatory-with-blowup-at-0";
        else if (blow0 && ki == "multiple-of-pi")
            out.label = "monotone-to-kpi";
        else if (ki == "unbounded")
            out.label = "unbounded";
        else
            out.label = "undetermined";
    } else {
        if (k0 == "regular-origin" && ki == "unbounded")
            out.label = "increasing-unbounded";
        else if (k0 == "half-integer-center")
            out.label = "half-integer-start";
        else if (k0 == "unbounded" && ki == "unbounded")
            out.label = "doubly-unbounded";
        else
            out.label = "undetermined";
    }
    return out;
}

AsymptoticChecks asymptotic_checks(const Params& params) {
    params.validate();
    AsymptoticChecks out;
    double p = params.p;

    {
        AsymptoticCheckItem it;
        it.name = "stable-manifold-slope-ratio";
        it.expected = 1.0;
        it.tolerance = 1e-3;
        it.measured = std::numeric_limits<double>::quiet_NaN();
        try {
            integrate::IntegratorConfig cfg;
            cfg.rtol = 1e-12;
            cfg.atol = 1e-14;
            cfg.t_max = 200.0;
            auto traj = integrate::integrate_backward_from_saddle(
                params, integrate::SystemId::poincare_forward, {1.0, 0.25 * kPi},
                Eigen::Vector2d(1.0, 0.0), 1e-8, cfg, {});
            double t;
            auto w_of = [](integrate::Chart ch, const Eigen::Vector2d& y) {
                if (ch == integrate::Chart::planar)
                    return y[0];
                double om = 1.0 - y[0];
                return om > 0.0 ? y[0] * std::cos(y[1]) / om : 1e308;
            };
            if (integrate::find_crossing(
                    traj, [&](integrate::Chart ch, const Eigen::Vector2d& y) {
                        return w_of(ch, y) - 1e4;
                    },
                    t)) {
                auto s = traj.eval_planar(t);
                it.measured = s.k / s.w;
                it.pass = std::abs(it.measured - 1.0) < it.tolerance;
            } else {
                out.note += "no w = 1e4 crossing on the trace; ";
            }
        } catch (const numeric_error& e) {
            out.note += std::string("manifold trace failed: ") + e.what() + "; ";
        }
        out.items.push_back(it);
    }

    {
        AsymptoticCheckItem it;
        it.name = "slope-ratio-derivative-fd";
        double w = 1e6;
        double hstep = 1e-6;
        double fd = (model::slope_ratio_F(params, w, 1.0 + hstep) -
                     model::slope_ratio_F(params, w, 1.0 - hstep)) /
                    (2.0 * hstep);
        it.expected = model::slope_ratio_dFdg(params, w, 1.0);
        it.measured = fd;
        it.tolerance = 1e-6 * std::max(1.0, std::abs(it.expected));
        it.pass = std::abs(fd - it.expected) <= it.tolerance;
        out.items.push_back(it);
    }

    {
        AsymptoticCheckItem it;
        it.name = "flat-fixed-point-bracket";
        double F = model::slope_ratio_F(params, 1e6, 1.0);
        it.measured = 1.0 - (2.0 - p) + 1.0 - F;
        it.expected = 0.0;
        it.tolerance = 1e-6;
        it.pass = std::abs(it.measured) <= it.tolerance;
        out.items.push_back(it);
    }

    if (p < 2.0) {
        try {
            integrate::IntegratorConfig cfg;
            cfg.rtol = 1e-12;
            cfg.atol = 1e-14;
            cfg.t_max = 200.0;
            auto traj = integrate::integrate_backward_from_saddle(
                params, integrate::SystemId::poincare_reversed,
                {1.0, kPi + critpoints::theta2(p)}, Eigen::Vector2d(1.0, 0.0), 1e-8, cfg, {});
            double t;
            auto w_of = [](integrate::Chart ch, const Eigen::Vector2d& y) {
                if (ch == integrate::Chart::planar)
                    return y[0];
                double om = 1.0 - y[0];
                return om > 0.0 ? y[0] * std::cos(y[1]) / om : -1e308;
            };
            if (integrate::find_crossing(
                    traj, [&](integrate::Chart ch, const Eigen::Vector2d& y) {
                        return w_of(ch, y) + 1e4;
                    },
                    t)) {
                auto s = traj.eval_planar(t);
                out.observed_plane_slope_ratio = s.w / s.k;
                out.note += "observed w/k = " + num(out.observed_plane_slope_ratio) +
                            " far along the second saddle manifold (p - 1 = " + num(p - 1.0) +
                            "); not asserted; ";
            }
        } catch (const numeric_error& e) {
            out.note += std::string("second manifold trace failed: ") + e.what() + "; ";
        }
    } else {
        out.note += "second saddle manifold ratio only traced for p < 2; ";
    }
    return out;
}

} // namespace solutions
} // namespace phmap
