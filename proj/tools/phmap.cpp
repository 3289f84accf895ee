#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "phmap/critpoints.hpp"
#include "phmap/errors.hpp"
#include "phmap/integrate.hpp"
#include "phmap/model.hpp"
#include "phmap/solutions.hpp"
#include "phmap/transforms.hpp"

#ifndef PHMAP_BUILD_ID
#define PHMAP_BUILD_ID "unknown"
#endif

using nlohmann::ordered_json;
namespace fs = std::filesystem;
using namespace phmap;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCaptionP12 = 1.5773502691896257;  // 1 + sqrt(3)/3

int run_cli(std::vector<std::string> args);

std::string fmt17(double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%.17g", v);
    return b;
}

std::string iso_now() {
    std::time_t tt = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

const char* chart_name(integrate::Chart c) {
    switch (c) {
        case integrate::Chart::radial: return "radial";
        case integrate::Chart::log: return "log";
        case integrate::Chart::planar: return "planar";
        case integrate::Chart::poincare: return "poincare";
    }
    return "?";
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

// outputs for one command plus the manifest that reproduces them
struct Run {
    fs::path dir;
    std::vector<std::string> command;
    ordered_json params;
    ordered_json config;
    ordered_json result;
    std::vector<std::string> outputs;
    std::string started;

    Run(const std::string& out_dir, std::vector<std::string> cmd)
        : dir(out_dir), command(std::move(cmd)), started(iso_now()) {
        fs::create_directories(dir);
    }

    std::ofstream open_csv(const std::string& name) {
        outputs.push_back(name);
        std::ofstream f(dir / name, std::ios::binary);
        if (!f)
            throw invalid_input("cannot write " + (dir / name).string());
        return f;
    }

    void write_json(const std::string& name, const ordered_json& j) {
        outputs.push_back(name);
        std::ofstream f(dir / name, std::ios::binary);
        if (!f)
            throw invalid_input("cannot write " + (dir / name).string());
        f << j.dump(2) << "\n";
    }

    void finish() {
        ordered_json m;
        m["command"] = command;
        m["params"] = params;
        m["config"] = config;
        m["build"] = PHMAP_BUILD_ID;
        m["started_at"] = started;
        m["finished_at"] = iso_now();
        m["outputs"] = outputs;
        if (!result.is_null())
            m["result"] = result;
        std::ofstream f(dir / "manifest.json", std::ios::binary);
        f << m.dump(2) << "\n";
    }
};

ordered_json config_json(const integrate::IntegratorConfig& c) {
    ordered_json j;
    j["rtol"] = c.rtol;
    j["atol"] = c.atol;
    j["t_max"] = c.t_max;
    j["switch_radius_out"] = c.switch_radius_out;
    j["switch_radius_in"] = c.switch_radius_in;
    j["equator_eps"] = c.equator_eps;
    return j;
}

void write_radial_csv(std::ofstream f, const std::vector<RadialPoint>& pts) {
    f << "r,h,dh\n";
    for (const auto& q : pts)
        f << fmt17(q.r) << ',' << fmt17(q.h) << ',' << fmt17(q.dh) << '\n';
}

PlanarState sample_planar(const integrate::Sample& s) {
    if (s.chart == integrate::Chart::planar)
        return {s.y[0], s.y[1]};
    return transforms::poincare_to_planar({s.y[0], s.y[1]});
}

void write_phase_csv(std::ofstream f, const integrate::Trajectory& traj) {
    f << "t,w,k,chart\n";
    for (const auto& s : traj.samples) {
        PlanarState ps = sample_planar(s);
        f << fmt17(s.t) << ',' << fmt17(ps.w) << ',' << fmt17(ps.k) << ','
          << chart_name(s.chart) << '\n';
    }
}

std::vector<RadialPoint> resample_log(const integrate::Trajectory& traj, double lo, double hi,
                                      int n) {
    double a = std::min(traj.t_begin(), traj.t_end());
    double b = std::max(traj.t_begin(), traj.t_end());
    lo = std::max(lo, a);
    hi = std::min(hi, b);
    std::vector<RadialPoint> out;
    if (!(hi > lo))
        return out;
    double la = std::log(lo);
    double lb = std::log(hi);
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        double r = std::exp(la + (lb - la) * i / (n - 1.0));
        auto y = traj.eval(r).second;
        out.push_back({r, y[0], y[1]});
    }
    return out;
}

void run_jobs(std::vector<std::function<void()>>& jobs) {
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("PHMAP_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1)
            workers = std::min<unsigned>(workers, static_cast<unsigned>(v));
    }
    workers = std::min<unsigned>(workers, jobs.size());
    std::vector<std::exception_ptr> errs(jobs.size());
    auto guarded = [&](std::size_t i) {
        try {
            jobs[i]();
        } catch (...) {
            errs[i] = std::current_exception();
        }
    };
    if (workers <= 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i)
            guarded(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < workers; ++i)
            pool.emplace_back([&] {
                for (std::size_t k; (k = next.fetch_add(1)) < jobs.size();)
                    guarded(k);
            });
        for (auto& th : pool)
            th.join();
    }
    for (auto& e : errs)
        if (e)
            std::rethrow_exception(e);
}

// ---------------------------------------------------------------- solve

struct SolveOpts {
    double p = 0;
    std::optional<double> w0, k0, h0, dh0, r0, rmax, tmax;
    std::string direction = "reversed";
    int branch = 0;
    double rtol = 1e-10;
    double atol = 1e-12;
    std::string out = "phmap_out";
};

int do_solve(const SolveOpts& o, const std::vector<std::string>& argv) {
    Params params{o.p, {}};
    params.validate();
    bool radial = o.h0 || o.dh0 || o.r0;
    integrate::IntegratorConfig cfg;
    cfg.rtol = o.rtol;
    cfg.atol = o.atol;

    Run run(o.out, argv);
    run.params["p"] = o.p;
    integrate::Trajectory traj;
    if (radial) {
        if (!(o.h0 && o.dh0 && o.r0 && o.rmax))
            throw invalid_input("radial runs need --h0 --dh0 --r0 --rmax");
        if (o.w0 || o.k0 || o.tmax)
            throw invalid_input("give either --w0/--k0/--tmax or --h0/--dh0/--r0/--rmax");
        if (!(*o.r0 > 0.0) || !(*o.rmax > 0.0))
            throw invalid_input("radii must be positive");
        cfg.t_max = *o.rmax;
        integrate::StartState st;
        st.t = *o.r0;
        st.y = Eigen::Vector2d(*o.h0, *o.dh0);
        traj = integrate::integrate(params, integrate::SystemId::radial, st, cfg);
        std::vector<RadialPoint> pts;
        pts.reserve(traj.samples.size());
        for (const auto& s : traj.samples)
            pts.push_back({s.t, s.y[0], s.y[1]});
        write_radial_csv(run.open_csv("solution.csv"), pts);
    } else {
        if (!(o.w0 && o.k0 && o.tmax))
            throw invalid_input("phase runs need --w0 --k0 --tmax");
        cfg.t_max = *o.tmax;
        auto system = o.direction == "forward" ? integrate::SystemId::planar_forward
                                               : integrate::SystemId::planar_reversed;
        integrate::StartState st;
        st.y = Eigen::Vector2d(*o.w0, *o.k0);
        st.branch = o.branch;
        traj = integrate::integrate(params, system, st, cfg);
        write_phase_csv(run.open_csv("solution.csv"), traj);
        run.params["direction"] = o.direction;
        run.params["branch"] = o.branch;
    }
    run.config = config_json(cfg);
    run.result["termination"] = reason_name(traj.termination);
    run.result["t_end"] = traj.t_end();
    run.result["n_samples"] = traj.samples.size();
    if (!traj.note.empty())
        run.result["note"] = traj.note;
    run.finish();
    if (traj.termination == integrate::TerminationReason::step_underflow ||
        traj.termination == integrate::TerminationReason::max_steps) {
        std::cerr << "integration failed: " << reason_name(traj.termination) << "\n";
        return 3;
    }
    return 0;
}

// ---------------------------------------------------------------- minimize

struct MinimizeOpts {
    double p = 0;
    double l = 0;
    bool oracle = false;
    int n_samples = 512;
    int grid_n = 2000;
    std::string out = "phmap_out";
};

int do_minimize(const MinimizeOpts& o, const std::vector<std::string>& argv) {
    Params params{o.p, o.l};
    params.validate();
    Run run(o.out, argv);
    run.params["p"] = o.p;
    run.params["l"] = o.l;

    auto res = solutions::minimizer(params, o.n_samples);
    write_radial_csv(run.open_csv("profile.csv"), res.profile.points);
    ordered_json rj;
    rj["p"] = o.p;
    rj["l"] = o.l;
    rj["r_star"] = res.r_star;
    rj["energy"] = res.energy;
    rj["h_at_1"] = res.profile.points.back().h;
    rj["reflected_alternative"] = res.reflected_alternative;
    if (o.oracle) {
        auto var = solutions::variational_minimizer(params, o.grid_n);
        write_radial_csv(run.open_csv("profile_oracle.csv"), var.points);
        double sup = 0.0;
        for (const auto& q : var.points) {
            auto y = res.trajectory.eval(res.r_star * q.r).second;
            sup = std::max(sup, std::abs(y[0] - q.h));
        }
        rj["oracle_sup_distance"] = sup;
        rj["oracle_energy"] = solutions::profile_energy(var);
        rj["oracle_grid_n"] = o.grid_n;
    }
    run.write_json("result.json", rj);
    run.config = ordered_json{{"n_samples", o.n_samples}};
    run.result["r_star"] = res.r_star;
    run.result["energy"] = res.energy;
    run.finish();
    return 0;
}

// ---------------------------------------------------------------- critical points

struct CritOpts {
    double p = 0;
    std::string system = "both";
    std::string format = "json";
    std::string out = "phmap_out";
};

ordered_json report_json(const critpoints::CriticalPointReport& r) {
    ordered_json j;
    j["system"] = r.system == System::forward ? "forward" : "reversed";
    j["name"] = r.name;
    if (r.at_infinity)
        j["angle_or_origin"] = r.angle;
    else
        j["angle_or_origin"] = "origin";
    if (r.matrix) {
        const auto& m = *r.matrix;
        j["matrix"] = {{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}};
    } else {
        j["matrix"] = nullptr;
    }
    if (r.numerical_jacobian) {
        const auto& m = *r.numerical_jacobian;
        j["numerical_jacobian"] = {{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}};
    } else {
        j["numerical_jacobian"] = nullptr;
    }
    if (r.eigenvalues) {
        j["eigenvalues"] = {{(*r.eigenvalues)[0].real(), (*r.eigenvalues)[0].imag()},
                            {(*r.eigenvalues)[1].real(), (*r.eigenvalues)[1].imag()}};
    } else {
        j["eigenvalues"] = nullptr;
    }
    j["class"] = r.classification;
    j["basis"] = r.basis;
    return j;
}

int do_critical_points(const CritOpts& o, const std::vector<std::string>& argv) {
    Params params{o.p, {}};
    params.validate();
    Run run(o.out, argv);
    run.params["p"] = o.p;
    run.params["system"] = o.system;

    std::vector<critpoints::CriticalPointReport> reports;
    if (o.system == "forward" || o.system == "both") {
        auto v = critpoints::all_critical_points(params, System::forward);
        reports.insert(reports.end(), v.begin(), v.end());
    }
    if (o.system == "reversed" || o.system == "both") {
        auto v = critpoints::all_critical_points(params, System::reversed);
        reports.insert(reports.end(), v.begin(), v.end());
    }

    if (o.format == "json") {
        ordered_json arr = ordered_json::array();
        for (const auto& r : reports)
            arr.push_back(report_json(r));
        run.write_json("critical_points.json", arr);
    } else {
        auto f = run.open_csv("critical_points.csv");
        f << "system,name,angle,class,m00,m01,m10,m11,ev0_re,ev0_im,ev1_re,ev1_im\n";
        for (const auto& r : reports) {
            f << (r.system == System::forward ? "forward" : "reversed") << ',' << r.name << ',';
            if (r.at_infinity)
                f << fmt17(r.angle);
            f << ',' << r.classification;
            if (r.matrix) {
                const auto& m = *r.matrix;
                f << ',' << fmt17(m(0, 0)) << ',' << fmt17(m(0, 1)) << ',' << fmt17(m(1, 0))
                  << ',' << fmt17(m(1, 1));
            } else {
                f << ",,,,";
            }
            if (r.eigenvalues) {
                const auto& e = *r.eigenvalues;
                f << ',' << fmt17(e[0].real()) << ',' << fmt17(e[0].imag()) << ','
                  << fmt17(e[1].real()) << ',' << fmt17(e[1].imag());
            } else {
                f << ",,,,";
            }
            f << '\n';
        }
    }
    run.result["n_points"] = reports.size();
    run.finish();
    return 0;
}

// ---------------------------------------------------------------- figures

struct FigureOpts {
    int figure = 0;
    std::optional<double> p;
    std::string out = "phmap_out";
};

struct PortraitRow {
    double t, x, y, w, k;
    const char* chart;
};

void append_portrait_rows(std::vector<PortraitRow>& rows, const integrate::Trajectory& traj,
                          bool reverse) {
    auto emit = [&](const integrate::Sample& s) {
        PlanarState ps = sample_planar(s);
        PoincareState pc = s.chart == integrate::Chart::poincare
                               ? PoincareState{s.y[0], s.y[1]}
                               : transforms::planar_to_poincare(ps);
        rows.push_back({s.t, pc.rho * std::cos(pc.phi), pc.rho * std::sin(pc.phi), ps.w, ps.k,
                        chart_name(s.chart)});
    };
    if (reverse) {
        for (auto it = traj.samples.rbegin(); it != traj.samples.rend(); ++it)
            emit(*it);
    } else {
        for (const auto& s : traj.samples)
            emit(s);
    }
}

int do_portrait(const Params& params, Run& run, int figure) {
    double ring = figure == 5 ? 3.0 : 0.3;
    double span = 8.0;
    integrate::IntegratorConfig cfg;
    cfg.rtol = 1e-10;
    cfg.atol = 1e-12;

    std::optional<double> a0;
    if (params.p < 2.0)
        a0 = solutions::alpha0(params).value;

    struct OrbitJob {
        std::string name;
        std::function<integrate::Trajectory()> make;
        bool reverse = false;
    };
    std::vector<OrbitJob> orbit_jobs;

    {
        integrate::IntegratorConfig mcfg = cfg;
        mcfg.t_max = 30.0;
        orbit_jobs.push_back({"p1_manifold",
                              [params, mcfg] {
                                  return integrate::integrate_backward_from_saddle(
                                      params, integrate::SystemId::poincare_reversed,
                                      {1.0, 1.75 * kPi}, Eigen::Vector2d(1.0, 0.0), 1e-8, mcfg);
                              },
                              false});
        orbit_jobs.push_back({"p2_manifold",
                              [params, mcfg] {
                                  return integrate::integrate_backward_from_saddle(
                                      params, integrate::SystemId::poincare_reversed,
                                      {1.0, kPi + critpoints::theta2(params.p)},
                                      Eigen::Vector2d(1.0, 0.0), 1e-8, mcfg);
                              },
                              true});
    }

    auto planar_run = [params, cfg](double w0, double k0, double tmax) {
        integrate::IntegratorConfig c = cfg;
        c.t_max = tmax;
        integrate::StartState st;
        st.y = Eigen::Vector2d(w0, k0);
        return integrate::integrate(params, integrate::SystemId::planar_reversed, st, c);
    };
    auto add_ic = [&](const std::string& name, double w0, double k0, double half_span) {
        orbit_jobs.push_back(
            {name + "_bwd", [=] { return planar_run(w0, k0, -half_span); }, true});
        orbit_jobs.push_back(
            {name + "_fwd", [=] { return planar_run(w0, k0, half_span); }, false});
    };

    std::vector<double> alphas;
    if (a0)
        alphas = {0.5 * *a0, 0.9 * *a0, *a0, 1.5 * *a0};
    else
        alphas = {0.5, 1.0, 2.0};
    for (double a : alphas) {
        char label[48];
        std::snprintf(label, sizeof label, "axis_start_k%.6g", -a);
        add_ic(label, 0.0, -a, span);
    }
    add_ic("mirror", 0.0, a0 ? 0.9 * *a0 : 1.0, span);

    for (int i = 0; i < 12; ++i) {
        double th = 2.0 * kPi * i / 12.0;
        char label[40];
        std::snprintf(label, sizeof label, "ring_%02d", i);
        add_ic(label, ring * std::cos(th), ring * std::sin(th), 0.5 * span);
    }

    std::vector<integrate::Trajectory> trajs(orbit_jobs.size());
    std::vector<std::function<void()>> jobs;
    jobs.reserve(orbit_jobs.size());
    for (std::size_t i = 0; i < orbit_jobs.size(); ++i)
        jobs.push_back([&, i] { trajs[i] = orbit_jobs[i].make(); });
    run_jobs(jobs);

    char fname[40];
    std::snprintf(fname, sizeof fname, "figure%d_portrait.csv", figure);
    auto f = run.open_csv(fname);
    f << "orbit,t,x,y,w,k,chart\n";
    for (std::size_t i = 0; i < orbit_jobs.size(); ++i) {
        std::vector<PortraitRow> rows;
        append_portrait_rows(rows, trajs[i], orbit_jobs[i].reverse);
        for (const auto& r : rows)
            f << orbit_jobs[i].name << ',' << fmt17(r.t) << ',' << fmt17(r.x) << ','
              << fmt17(r.y) << ',' << fmt17(r.w) << ',' << fmt17(r.k) << ',' << r.chart << '\n';
    }

    ordered_json fj;
    fj["figure"] = figure;
    fj["p"] = params.p;
    fj["ring_radius"] = ring;
    if (a0)
        fj["alpha0"] = *a0;
    ordered_json names = ordered_json::array();
    for (const auto& j : orbit_jobs)
        names.push_back(j.name);
    fj["orbits"] = names;

    if (std::abs(params.p - 2.0) < 1e-9) {
        // the P1 outgoing manifold must return to the equator at the antipodal
        // saddle; measure the closest approach since the traced orbit slides
        // along the equator once it arrives with any finite seeding offset
        const auto& tr = trajs[0];
        if (tr.samples.empty())
            throw consistency_failure("empty manifold trace at p = 2");
        const double tx = std::cos(1.25 * kPi), ty = std::sin(1.25 * kPi);
        double dmin = std::numeric_limits<double>::infinity();
        // skip the seeding neighborhood of P1 itself
        for (std::size_t i = tr.samples.size() / 4; i < tr.samples.size(); ++i) {
            const auto& s = tr.samples[i];
            PoincareState pc = s.chart == integrate::Chart::poincare
                                   ? PoincareState{s.y[0], s.y[1]}
                                   : transforms::planar_to_poincare(sample_planar(s));
            const double dx = pc.rho * std::cos(pc.phi) - tx;
            const double dy = pc.rho * std::sin(pc.phi) - ty;
            dmin = std::min(dmin, std::hypot(dx, dy));
        }
        fj["heteroclinic_min_distance"] = dmin;
        if (!(dmin < 0.05))
            throw consistency_failure(
                "saddle connection check failed: closest approach " + fmt17(dmin));
    }
    std::snprintf(fname, sizeof fname, "figure%d.json", figure);
    run.write_json(fname, fj);
    run.config = config_json(cfg);
    return 0;
}

int do_figures(const FigureOpts& o, const std::vector<std::string>& argv) {
    double caption;
    switch (o.figure) {
        case 1:
        case 2: caption = kCaptionP12; break;
        case 3: caption = 3.0; break;
        case 4: caption = 2.1; break;
        case 5:
        case 6: caption = kCaptionP12; break;
        default: throw invalid_input("unknown figure id");
    }
    double p = o.p.value_or(caption);
    if (o.figure <= 4 && std::abs(p - caption) > 1e-6)
        throw invalid_input("figure " + std::to_string(o.figure) + " is drawn at p = " +
                            fmt17(caption));
    Params params{p, {}};
    params.validate();

    Run run(o.out, argv);
    run.params["p"] = p;
    run.params["figure"] = o.figure;

    auto radial_both = [&](double h1, double dh1, double r_lo, double r_hi) {
        integrate::IntegratorConfig cfg;
        cfg.t_max = r_hi;
        integrate::StartState st;
        st.t = 1.0;
        st.y = Eigen::Vector2d(h1, dh1);
        auto fwd = integrate::integrate(params, integrate::SystemId::radial, st, cfg);
        cfg.t_max = r_lo;
        auto bwd = integrate::integrate(params, integrate::SystemId::radial, st, cfg);
        return std::pair{std::move(bwd), std::move(fwd)};
    };
    auto merge = [&](const integrate::Trajectory& bwd, const integrate::Trajectory& fwd,
                     double lo, double hi, int n) {
        auto a = resample_log(bwd, lo, 1.0, n / 2);
        auto b = resample_log(fwd, 1.0, hi, n / 2);
        if (!a.empty() && !b.empty() && b.front().r <= a.back().r)
            b.erase(b.begin());
        a.insert(a.end(), b.begin(), b.end());
        return a;
    };

    ordered_json fj;
    fj["figure"] = o.figure;
    fj["p"] = p;

    switch (o.figure) {
        case 1: {
            auto traj = solutions::canonical_trajectory(params, 100.0, 1e5);
            write_radial_csv(run.open_csv("figure1_curve.csv"),
                             resample_log(traj, 1e-6, 100.0, 3000));
            write_radial_csv(run.open_csv("figure1_zoom.csv"),
                             resample_log(traj, 1e-5, 0.1, 1500));
            fj["slope"] = 1e5;
            break;
        }
        case 2: {
            double a0 = solutions::alpha0(params).value;
            double alpha = 1.5 * a0;
            auto [bwd, fwd] = radial_both(0.5 * kPi, alpha, 1e-3, 1e3);
            write_radial_csv(run.open_csv("figure2_curve.csv"),
                             merge(bwd, fwd, 1e-3, 1e3, 3000));
            write_radial_csv(run.open_csv("figure2_zoom.csv"),
                             resample_log(bwd, 1e-3, 0.05, 1500));
            fj["alpha0"] = a0;
            fj["alpha"] = alpha;
            break;
        }
        case 3: {
            auto traj = solutions::canonical_trajectory(params, 1e3, 1.0);
            write_radial_csv(run.open_csv("figure3_left.csv"),
                             resample_log(traj, 1e-5, 1e3, 3000));
            auto [bwd, fwd] = radial_both(0.5 * kPi, 200.0, 1e-4, 100.0);
            write_radial_csv(run.open_csv("figure3_right.csv"),
                             merge(bwd, fwd, 1e-4, 100.0, 3000));
            fj["slope"] = 1.0;
            fj["right_dh1"] = 200.0;
            break;
        }
        case 4: {
            auto [bwd, fwd] = radial_both(0.5 * kPi, 0.1, 1e-6, 1e3);
            write_radial_csv(run.open_csv("figure4_curve.csv"),
                             merge(bwd, fwd, 1e-6, 1e3, 3000));
            write_radial_csv(run.open_csv("figure4_zoom.csv"),
                             resample_log(bwd, 1e-6, 1.0, 1500));
            fj["dh1"] = 0.1;
            break;
        }
        case 5:
        case 6: {
            int rc = do_portrait(params, run, o.figure);
            run.finish();
            return rc;
        }
    }
    char fname[32];
    std::snprintf(fname, sizeof fname, "figure%d.json", o.figure);
    run.write_json(fname, fj);
    run.finish();
    return 0;
}

// ---------------------------------------------------------------- oscillations

struct OscOpts {
    double p = 0;
    double slope = 1e5;
    double rmax = 1e3;
    std::string out = "phmap_out";
};

int do_oscillations(const OscOpts& o, const std::vector<std::string>& argv) {
    Params params{o.p, {}};
    params.validate();
    Run run(o.out, argv);
    run.params["p"] = o.p;
    run.params["slope"] = o.slope;
    run.params["r_max"] = o.rmax;

    auto profile = solutions::canonical_global(params, o.rmax, o.slope);
    auto rep = solutions::oscillation_analysis(profile);

    auto f = run.open_csv("oscillations.csv");
    f << "n,r_n,h_n,kind,amplitude\n";
    for (std::size_t n = 0; n < rep.critical_radii.size(); ++n)
        f << n << ',' << fmt17(rep.critical_radii[n]) << ',' << fmt17(rep.values[n]) << ','
          << rep.kinds[n] << ',' << fmt17(rep.amplitudes[n]) << '\n';

    ordered_json j;
    j["p"] = o.p;
    j["slope"] = o.slope;
    j["r_max"] = o.rmax;
    j["n_critical"] = rep.critical_radii.size();
    j["n0"] = rep.n0;
    j["max_index"] = rep.max_index;
    j["h_end"] = profile.points.back().h;
    run.write_json("oscillations.json", j);
    run.result["n_critical"] = rep.critical_radii.size();
    run.finish();
    return 0;
}

// ---------------------------------------------------------------- classify

struct ClassifyOpts {
    double p = 0;
    std::optional<double> slope, w0, k0;
    int branch = 0;
    double horizon = 1e3;
    std::string out = "phmap_out";
};

int do_classify(const ClassifyOpts& o, const std::vector<std::string>& argv) {
    Params params{o.p, {}};
    params.validate();
    solutions::StartSpec start;
    if (o.slope && !(o.w0 || o.k0)) {
        start = solutions::StartSpec::origin(*o.slope);
    } else if (!o.slope && o.w0 && o.k0) {
        start = solutions::StartSpec::planar(*o.w0, *o.k0, o.branch);
    } else {
        throw invalid_input("give either --slope or both --w0 and --k0");
    }
    Run run(o.out, argv);
    run.params["p"] = o.p;
    run.params["horizon"] = o.horizon;

    auto cls = solutions::classify_solution(params, start, o.horizon);
    ordered_json j;
    j["p"] = o.p;
    if (start.kind == solutions::StartSpec::Kind::origin_limit) {
        j["start"] = {{"kind", "origin_limit"}, {"slope", start.slope}};
    } else {
        j["start"] = {{"kind", "planar"},
                      {"w", start.state.w},
                      {"k", start.state.k},
                      {"branch", start.branch}};
    }
    j["horizon"] = o.horizon;
    j["label"] = cls.label;
    const auto& e = cls.evidence;
    j["evidence"] = {{"limit0_kind", e.limit0_kind},
                     {"limit0_value", e.limit0_value},
                     {"limitinf_kind", e.limitinf_kind},
                     {"limitinf_value", e.limitinf_value},
                     {"monotone_increasing", e.monotone_increasing},
                     {"crit_count_backward", e.crit_count_backward},
                     {"crit_count_forward", e.crit_count_forward},
                     {"h_end_backward", e.h_end_backward},
                     {"h_end_forward", e.h_end_forward},
                     {"note", e.note}};
    run.write_json("classification.json", j);
    run.result["label"] = cls.label;
    run.finish();
    return 0;
}

// ---------------------------------------------------------------- alpha0 / checks

int do_alpha0(double p, const std::string& out, const std::vector<std::string>& argv) {
    Params params{p, {}};
    params.validate();
    Run run(out, argv);
    run.params["p"] = p;
    auto a = solutions::alpha0(params);
    ordered_json j;
    j["p"] = a.p;
    j["alpha0"] = a.value;
    run.write_json("alpha0.json", j);
    run.result["alpha0"] = a.value;
    run.finish();
    return 0;
}

int do_checks(double p, const std::string& out, const std::vector<std::string>& argv) {
    Params params{p, {}};
    params.validate();
    Run run(out, argv);
    run.params["p"] = p;
    auto rep = solutions::asymptotic_checks(params);
    ordered_json j;
    j["p"] = p;
    ordered_json items = ordered_json::array();
    bool all = true;
    for (const auto& it : rep.items) {
        items.push_back({{"name", it.name},
                         {"pass", it.pass},
                         {"measured", it.measured},
                         {"expected", it.expected},
                         {"tolerance", it.tolerance}});
        all = all && it.pass;
    }
    j["items"] = items;
    j["all_pass"] = all;
    j["observed_plane_slope_ratio"] = rep.observed_plane_slope_ratio;
    j["note"] = rep.note;
    run.write_json("checks.json", j);
    run.result["all_pass"] = all;
    run.finish();
    return 0;
}

// ---------------------------------------------------------------- rerun

int do_rerun(const std::string& manifest, const std::optional<std::string>& out) {
    std::ifstream f(manifest);
    if (!f)
        throw invalid_input("cannot read " + manifest);
    ordered_json m = ordered_json::parse(f, nullptr, true);
    if (!m.contains("command") || !m["command"].is_array())
        throw invalid_input("manifest has no command array");
    std::vector<std::string> tokens;
    for (const auto& t : m["command"])
        tokens.push_back(t.get<std::string>());
    if (out) {
        std::vector<std::string> stripped;
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (tokens[i] == "--out" || tokens[i] == "--out-dir") {
                ++i;  // drop the flag and its value
                continue;
            }
            stripped.push_back(tokens[i]);
        }
        stripped.push_back("--out");
        stripped.push_back(*out);
        tokens = std::move(stripped);
    }
    return run_cli(std::move(tokens));
}

// ---------------------------------------------------------------- driver

int run_cli(std::vector<std::string> args) {
    CLI::App app{"rotationally symmetric p-harmonic shell profiles"};
    app.require_subcommand(1);

    SolveOpts so;
    auto* solve = app.add_subcommand("solve", "integrate one trajectory");
    solve->add_option("--p", so.p, "exponent p > 1")->required();
    solve->add_option("--w0", so.w0, "phase start w");
    solve->add_option("--k0", so.k0, "phase start k");
    solve->add_option("--h0", so.h0, "radial start h");
    solve->add_option("--dh0", so.dh0, "radial start dh/dr");
    solve->add_option("--r0", so.r0, "radial start radius");
    solve->add_option("--rmax", so.rmax, "radial target radius");
    solve->add_option("--tmax", so.tmax, "phase time span (signed)");
    solve->add_option("--direction", so.direction, "phase flow: forward or reversed")
        ->check(CLI::IsMember({"forward", "reversed"}));
    solve->add_option("--branch", so.branch, "cotangent branch index");
    solve->add_option("--rtol", so.rtol, "relative tolerance");
    solve->add_option("--atol", so.atol, "absolute tolerance");
    solve->add_option("--out,--out-dir", so.out, "output directory");

    MinimizeOpts mo;
    auto* minimize = app.add_subcommand("minimize", "boundary-value profile h(1)=l");
    minimize->add_option("--p", mo.p, "exponent p > 1")->required();
    minimize->add_option("--l", mo.l, "boundary value in (0, pi/2]")->required();
    minimize->add_flag("--oracle", mo.oracle, "also run the discretized descent oracle");
    minimize->add_option("--n-samples", mo.n_samples, "profile sample count");
    minimize->add_option("--grid-n", mo.grid_n, "oracle grid cells");
    minimize->add_option("--out,--out-dir", mo.out, "output directory");

    CritOpts co;
    auto* crit = app.add_subcommand("critical-points", "linearize all critical points");
    crit->add_option("--p", co.p, "exponent p > 1")->required();
    crit->add_option("--system", co.system, "forward, reversed, or both")
        ->check(CLI::IsMember({"forward", "reversed", "both"}));
    crit->add_option("--format", co.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    crit->add_option("--out,--out-dir", co.out, "output directory");

    FigureOpts fo;
    auto* figures = app.add_subcommand("figures", "emit the data behind one figure");
    figures->add_option("--figure", fo.figure, "figure id 1..6")
        ->required()
        ->check(CLI::Range(1, 6));
    figures->add_option("--p", fo.p, "exponent (defaults to the figure's value)");
    figures->add_option("--out,--out-dir", fo.out, "output directory");

    OscOpts oo;
    auto* osc = app.add_subcommand("oscillations", "critical radii of the global solution");
    osc->add_option("--p", oo.p, "exponent p > 1")->required();
    osc->add_option("--slope", oo.slope, "origin slope of the global solution");
    osc->add_option("--rmax", oo.rmax, "sampling horizon");
    osc->add_option("--out,--out-dir", oo.out, "output directory");

    ClassifyOpts lo;
    auto* classify = app.add_subcommand("classify", "label a solution's asymptotics");
    classify->add_option("--p", lo.p, "exponent p > 1")->required();
    classify->add_option("--slope", lo.slope, "origin-limit start: h ~ slope r");
    classify->add_option("--w0", lo.w0, "planar start w at r = 1");
    classify->add_option("--k0", lo.k0, "planar start k at r = 1");
    classify->add_option("--branch", lo.branch, "cotangent branch index");
    classify->add_option("--horizon", lo.horizon, "radial horizon");
    classify->add_option("--out,--out-dir", lo.out, "output directory");

    double ap = 0;
    std::string aout = "phmap_out";
    auto* alpha = app.add_subcommand("alpha0", "threshold slope for 1 < p < 2");
    alpha->add_option("--p", ap, "exponent in (1, 2)")->required();
    alpha->add_option("--out,--out-dir", aout, "output directory");

    double cp = 0;
    std::string cout_dir = "phmap_out";
    auto* checks = app.add_subcommand("checks", "asymptotic spot checks");
    checks->add_option("--p", cp, "exponent p > 1")->required();
    checks->add_option("--out,--out-dir", cout_dir, "output directory");

    std::string rmanifest;
    std::optional<std::string> rout;
    auto* rerun = app.add_subcommand("rerun", "re-execute a run manifest");
    rerun->add_option("--manifest", rmanifest, "path to manifest.json")
        ->required()
        ->check(CLI::ExistingFile);
    rerun->add_option("--out,--out-dir", rout, "override output directory");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*solve)
            return do_solve(so, args);
        if (*minimize)
            return do_minimize(mo, args);
        if (*crit)
            return do_critical_points(co, args);
        if (*figures)
            return do_figures(fo, args);
        if (*osc)
            return do_oscillations(oo, args);
        if (*classify)
            return do_classify(lo, args);
        if (*alpha)
            return do_alpha0(ap, aout, args);
        if (*checks)
            return do_checks(cp, cout_dir, args);
        if (*rerun)
            return do_rerun(rmanifest, rout);
    } catch (const invalid_input& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const event_not_found& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(std::move(args));
}
