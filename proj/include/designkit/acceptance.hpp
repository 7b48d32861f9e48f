#pragma once

// Acceptance suite shared by the `validate` command and the acceptance test
// binary. Each criterion runs its own workload, times itself and reports a
// list of named checks.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "designkit/airfoil.hpp"
#include "designkit/bemt.hpp"
#include "designkit/explorer.hpp"
#include "designkit/flightsim.hpp"
#include "designkit/io.hpp"
#include "designkit/powertrain.hpp"
#include "designkit/wing.hpp"

namespace designkit::acceptance {

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
    std::string known_gap;  // non-empty when a failure here is analysed and recorded

    Check() = default;
    Check(std::string n, bool p, std::string d) : name(std::move(n)), pass(p), detail(std::move(d)) {}
};

struct CriterionResult {
    int id = 0;
    std::string title;
    std::vector<Check> checks;
    double seconds = 0.0;
    std::string error;  // set when the workload threw

    bool pass() const {
        if (!error.empty()) return false;
        for (const auto& c : checks)
            if (!c.pass) return false;
        return !checks.empty();
    }

    // Every failing check is a recorded gap.
    bool only_known_gaps() const {
        if (!error.empty() || pass()) return false;
        for (const auto& c : checks)
            if (!c.pass && c.known_gap.empty()) return false;
        return true;
    }
};

struct KnownGap {
    int id;
    const char* check;
    const char* reason;
};

// Checks that this solver and polar cannot meet; see README "Known gaps".
inline const std::vector<KnownGap>& known_gaps() {
    static const std::vector<KnownGap> gaps = {
        {2, "eta(2000) - eta(3200) >= 0.10", "3200 rpm efficiency lands near 0.75 with the bundled SC1095 polar"},
        {2, "eta(3200)", "3200 rpm efficiency lands near 0.75 with the bundled SC1095 polar"},
        {3, "FM argmax |twist| < 20 deg", "fixed-thrust FM peaks at -22 deg twist on this grid"},
    };
    return gaps;
}

struct Context {
    airfoil::AirfoilPolar naca0012;
    airfoil::AirfoilPolar sc1095;

    static Context load() { return {io::resolve_polar("naca0012"), io::resolve_polar("sc1095")}; }
};

inline constexpr int kCriteria = 10;

namespace detail {

inline std::string fmt(const char* f, double a) {
    char b[128];
    std::snprintf(b, sizeof b, f, a);
    return b;
}
inline std::string fmt(const char* f, double a, double c) {
    char b[160];
    std::snprintf(b, sizeof b, f, a, c);
    return b;
}
inline std::string fmt(const char* f, double a, double c, double d) {
    char b[192];
    std::snprintf(b, sizeof b, f, a, c, d);
    return b;
}

inline Check within(const std::string& name, double v, double lo, double hi, const char* unit = "") {
    char b[160];
    std::snprintf(b, sizeof b, "%.6g%s in [%.6g, %.6g]", v, unit, lo, hi);
    return {name, v >= lo && v <= hi, b};
}

inline Check close(const std::string& name, double v, double want, double tol) {
    char b[160];
    std::snprintf(b, sizeof b, "%.15g vs %.15g (tol %.1g)", v, want, tol);
    return {name, std::abs(v - want) <= tol, b};
}

inline Check runtime(double seconds, double limit) {
    return {"runtime", seconds < limit, fmt("%.3f s < %.0f s", seconds, limit)};
}

// ---------------------------------------------------------------------------

inline void baseline_thrust(const Context& c, std::vector<Check>& out) {
    const auto g = bemt::planform(0.42, 10.0, 1.0, 0.0, 0.0);
    const auto p = bemt::evaluate_rotor(g, bemt::at_rpm(3200.0, 0.0, deg2rad(8.5)), c.naca0012);
    out.push_back(within("thrust at 8.5 deg", p.thrust, 50.0 * 0.85, 50.0 * 1.15, " N"));
}

inline void rpm_efficiency(const Context& c, std::vector<Check>& out) {
    const auto g = bemt::planform(0.42, 12.0, 5.0 / 3.0, deg2rad(-30.0), deg2rad(30.0));
    const double e2000 = bemt::evaluate_rotor(g, bemt::at_rpm(2000.0, 20.0, deg2rad(16.0)), c.sc1095).eta_p;
    const double e3200 = bemt::evaluate_rotor(g, bemt::at_rpm(3200.0, 20.0, deg2rad(16.0)), c.sc1095).eta_p;
    out.push_back({"eta(2000) - eta(3200) >= 0.10", e2000 - e3200 >= 0.10,
                   fmt("%.4f - %.4f = %.4f", e2000, e3200, e2000 - e3200)});
    out.push_back(within("eta(2000)", e2000, 0.69, 0.85));
    out.push_back(within("eta(3200)", e3200, 0.53, 0.69));
}

inline void optimization(const Context& c, std::vector<Check>& out) {
    const explorer::OptimizationSpec spec;
    const auto r = explorer::optimize(spec, c.sc1095);
    out.push_back(within("R*", r.r_star, 0.34, 0.42, " m"));
    out.push_back(within("twist*", rad2deg(r.twist_star), -30.0, -18.0, " deg"));
    const auto fm = explorer::argmax_cell(r.fm, r.twists);
    const auto eta = explorer::argmax_cell(r.eta, r.twists);
    const double tw_fm = fm ? rad2deg(r.twists[fm->twist]) : NAN;
    const double tw_eta = eta ? rad2deg(r.twists[eta->twist]) : NAN;
    out.push_back({"FM argmax |twist| < 20 deg", std::abs(tw_fm) < 20.0,
                   fmt("twist %.1f deg at R %.2f m", tw_fm, fm ? r.radii[fm->radius] : NAN)});
    out.push_back({"eta argmax |twist| > 30 deg", std::abs(tw_eta) > 30.0,
                   fmt("twist %.1f deg at R %.2f m", tw_eta, eta ? r.radii[eta->radius] : NAN)});
}

inline void biplane(const Context&, std::vector<Check>& out) {
    out.push_back(close("ratio at beta 1", wing::biplane_power_ratio(1.0), 0.5, 1e-12));
    out.push_back(close("ratio at beta 1/sqrt2", wing::biplane_power_ratio(1.0 / std::sqrt(2.0)), 1.0, 1e-12));
    out.push_back(close("ratio at beta 0.8", wing::biplane_power_ratio(0.8), 0.78125, 1e-12));
    // 130 N/m2 sits above the 500 m stall limit (126) but below the sea-level
    // one (132.3); geometry depends only on W and W/S.
    wing::WingDesignInputs in;
    in.rho = kRhoSeaLevel;
    const auto s = wing::size_biplane(in, 130.0);
    out.push_back(within("wing area", s.wing.area, 0.754 * 0.95, 0.754 * 1.05, " m2"));
    out.push_back(within("span", s.wing.span, 2.29 * 0.95, 2.29 * 1.05, " m"));
    out.push_back(within("root chord", s.wing.root_chord, 0.39 * 0.95, 0.39 * 1.05, " m"));
    out.push_back(within("tip chord", s.wing.tip_chord, 0.176 * 0.95, 0.176 * 1.05, " m"));
}

inline void stall(const Context&, std::vector<Check>& out) {
    const wing::WingDesignInputs in;  // rho 1.167 at 500 m
    out.push_back(within("stall wing loading", wing::stall_wing_loading(in), 114.0, 138.0, " N/m2"));
}

inline void power(const Context& c, std::vector<Check>& out) {
    const powertrain::VehicleDesign v;
    const auto r = powertrain::design_power_budget(v, c.sc1095);
    const double hover = w2hp(r.budget.hover_power);
    const double cruise = w2hp(r.budget.cruise_power);
    out.push_back(within("hover power", hover, 1.93 * 0.85, 1.93 * 1.15, " hp"));
    out.push_back(within("cruise power", cruise, 0.7 * 0.8, 0.7 * 1.2, " hp"));
    out.push_back(within("reduction", r.budget.reduction_fraction, 0.60, 1.0));
    // Margin arithmetic on the printed hover figure.
    bemt::RotorPerformance quarter;
    quarter.power = hp2w(1.93) / 4.0;
    const std::vector<bemt::RotorPerformance> h(4, quarter);
    const auto b = powertrain::power_budget(h, h, 0.10, v.engine, 12800.0);
    const double req = w2hp(b.required_installed_power);
    out.push_back(close("1.93 hp x 1.10", req, 1.93 * 1.10, 1e-12));
    out.push_back(close("printed 2.13 hp", req, 2.13, 0.01));
}

inline void gears(const Context&, std::vector<Check>& out) {
    const auto t = powertrain::build_gear_train();
    out.push_back({"overall ratio == 4", t.overall_ratio() == 4.0, fmt("%.17g", t.overall_ratio())});
    struct Row {
        powertrain::GearRole role;
        int teeth;
        double diameter_mm, face_mm, module_mm, add_mm, ded_mm;
    };
    using R = powertrain::GearRole;
    const Row table[] = {{R::E, 17, 20, 36, 1.2, 1.2, 1.44},  {R::M1, 34, 40, 36, 1.2, 1.2, 1.44},
                         {R::M2, 34, 40, 36, 1.2, 1.2, 1.44}, {R::S1, 68, 80, 36, 1.2, 1.2, 1.44},
                         {R::S2, 68, 80, 36, 1.2, 1.2, 1.44}, {R::B, 20, 36, 8, 1.8, 1.8, 4.1}};
    int mismatches = 0;
    std::string where;
    for (const auto& row : table) {
        const auto& g = t.gear(row.role);
        const bool ok = g.teeth == row.teeth && g.pitch_diameter_mm == row.diameter_mm &&
                        g.face_width_mm == row.face_mm && g.module_mm == row.module_mm &&
                        g.addendum_mm == row.add_mm && g.dedendum_mm == row.ded_mm;
        if (!ok) {
            ++mismatches;
            where += std::string(" ") + powertrain::to_string(row.role);
        }
    }
    out.push_back({"gear table reproduced", mismatches == 0, mismatches ? "mismatch:" + where : "6 gears exact"});
    const int tmin = powertrain::min_pinion_teeth(2.0, deg2rad(20.0));
    out.push_back({"interference minimum at ratio 2", tmin == 15, fmt("%.0f teeth", tmin)});
    out.push_back({"pinion 17 >= minimum", t.gear(R::E).teeth >= tmin,
                   fmt("%.0f >= %.0f", t.gear(R::E).teeth, tmin)});
}

inline void weight_loop(const Context&, std::vector<Check>& out) {
    const auto calib = powertrain::baseline_ledger();
    const powertrain::ScalingModel model;
    double worst_err = 0.0;
    int worst_iter = 0;
    for (int k = 0; k <= 26; ++k) {
        const double start = 12.0 + 0.5 * k;
        const auto r = powertrain::iterate_gross_weight(calib, model, start);
        worst_err = std::max(worst_err, std::abs(r.gross_kg - 18.5));
        worst_iter = std::max(worst_iter, r.iterations);
    }
    out.push_back({"converged to 18.5 +/- 0.5 kg from 12..25 kg", worst_err <= 0.5,
                   fmt("worst |m - 18.5| = %.4f kg", worst_err)});
    out.push_back({"iterations <= 20", worst_iter <= 20, fmt("worst %.0f", worst_iter)});
}

inline void controller(const Context& c, std::vector<Check>& out) {
    using namespace flightsim;
    const auto p = default_vehicle_params();
    double worst = 0.0;
    const ControlCommand cmds[] = {{181.5, {0, 0, 0}}, {200.0, {3.0, -2.0, 0.5}}, {150.0, {-1.0, 4.0, -0.8}}};
    for (const auto& cmd : cmds) {
        const auto back = mix_forward(allocate(cmd, p), p);
        worst = std::max(worst, std::abs(back.thrust - cmd.thrust) / cmd.thrust);
        for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(back.moment[i] - cmd.moment[i]));
    }
    out.push_back({"allocation round trip", worst < 1e-12, fmt("max error %.3g", worst)});

    VehicleState s;
    const auto loads = rotor_loads(allocate({p.mass * p.gravity, {0, 0, 0}}, p), p);
    for (int k = 0; k < 1000; ++k) s = step_dynamics(s, loads, p, 0.005);
    double drift = 0.0;
    for (int i = 0; i < 3; ++i) {
        drift = std::max({drift, std::abs(s.position[i]), std::abs(s.velocity[i]), std::abs(s.euler[i]),
                          std::abs(s.rates[i])});
    }
    out.push_back({"hover stationary over 1000 steps", drift < 1e-9, fmt("max drift %.3g", drift)});

    const CtPitchMap map(powertrain::design_rotor(), c.sc1095, bemt::at_rpm(3200.0, 0.0, 0.0));
    MissionSpec m;
    m.waypoints = mission_waypoints();
    const auto r = run_mission(m, p, default_gains(p), map);
    const auto& last = r.log.back().state.position;
    const double miss = distance(last, {0.0, 2.0, 0.0});
    out.push_back({"final position within 0.1 m of (0,2,0)", miss < 0.1,
                   fmt("(%.3f, %.3f, %.3f)", last[0], last[1], last[2])});
    out.push_back({"attitude tracking error < 5 deg", rad2deg(r.max_tracking_error) < 5.0,
                   fmt("%.3f deg", rad2deg(r.max_tracking_error))});
}

inline void solver_physics(const Context& c, std::vector<Check>& out) {
    const auto g = bemt::planform(0.42, 10.0, 1.0, 0.0, 0.0);
    const auto tw = bemt::planform(0.42, 12.0, 5.0 / 3.0, deg2rad(-24.0), deg2rad(24.0));
    double max_res = 0.0;
    bool f_ok = true, fm_ok = true;
    for (double th : {2.0, 6.0, 10.0, 14.0}) {
        for (const auto* geom : {&g, &tw}) {
            for (double v : {0.0, 15.0}) {
                const auto sol = bemt::solve_rotor(*geom, bemt::at_rpm(3200.0, v, deg2rad(th)), c.sc1095);
                for (const auto& st : sol.stations) {
                    max_res = std::max(max_res, std::abs(st.residual));
                    f_ok = f_ok && st.F > 0.0 && st.F <= 1.0;
                }
                if (v == 0.0 && sol.perf.thrust > 0.0) fm_ok = fm_ok && sol.perf.fm > 0.0 && sol.perf.fm <= 1.0;
            }
        }
    }
    out.push_back({"station residual < 1e-10", max_res < 1e-10, fmt("max %.3g", max_res)});
    out.push_back({"F in (0, 1]", f_ok, f_ok ? "all stations" : "violated"});
    out.push_back({"FM in (0, 1]", fm_ok, fm_ok ? "hover cases" : "violated"});

    const auto op = bemt::at_rpm(3200.0, 0.0, deg2rad(8.0));
    const double d = std::abs(bemt::evaluate_rotor(tw, op, c.sc1095, 128).CT -
                              bemt::evaluate_rotor(tw, op, c.sc1095, 256).CT);
    out.push_back({"|dCT| 128 -> 256 < 1e-3", d < 1e-3, fmt("%.3g", d)});

    // Same collective and advance ratio at two rotor speeds.
    const auto a = bemt::evaluate_rotor(tw, bemt::at_rpm(2000.0, 12.5, deg2rad(10.0)), c.sc1095);
    const auto b = bemt::evaluate_rotor(tw, bemt::at_rpm(3200.0, 20.0, deg2rad(10.0)), c.sc1095);
    const double dev = std::max(std::abs(a.CT - b.CT) / std::abs(b.CT), std::abs(a.CP - b.CP) / std::abs(b.CP));
    out.push_back({"Omega invariance of CT, CP", dev < 1e-9, fmt("relative %.3g", dev)});
}

struct Spec {
    const char* title;
    double time_limit;  // s, 0 when none is set
    void (*run)(const Context&, std::vector<Check>&);
};

inline const Spec& spec(int id) {
    static const Spec table[kCriteria] = {
        {"Baseline thrust point", 1.0, baseline_thrust},
        {"RPM efficiency claim", 5.0, rpm_efficiency},
        {"Optimization neighborhood", 600.0, optimization},
        {"Biplane closed forms and wing sizing", 0.0, biplane},
        {"Stall wing loading", 0.0, stall},
        {"Power budget", 0.0, power},
        {"Gear train", 0.0, gears},
        {"Weight loop", 0.0, weight_loop},
        {"Controller properties", 30.0, controller},
        {"Solver physics suite", 0.0, solver_physics},
    };
    return table[id - 1];
}

}  // namespace detail

inline CriterionResult run_criterion(int id, const Context& ctx) {
    if (id < 1 || id > kCriteria) throw Error(ErrorKind::InvalidInput, "no such criterion", {{"id", id}});
    const auto& s = detail::spec(id);
    CriterionResult r;
    r.id = id;
    r.title = s.title;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        s.run(ctx, r.checks);
    } catch (const Error& e) {
        r.error = e.to_json().dump();
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (s.time_limit > 0.0) r.checks.push_back(detail::runtime(r.seconds, s.time_limit));
    for (auto& c : r.checks)
        for (const auto& g : known_gaps())
            if (g.id == id && c.name == g.check) c.known_gap = g.reason;
    return r;
}

// "PASS   3  Optimization neighborhood  (38.10 s)" followed by one indented
// line per check. FAIL* marks a criterion whose failures are all known gaps.
inline std::string format(const CriterionResult& r) {
    char head[160];
    const char* tag = r.pass() ? "PASS " : r.only_known_gaps() ? "FAIL*" : "FAIL ";
    std::snprintf(head, sizeof head, "%s %2d  %s  (%.2f s)\n", tag, r.id, r.title.c_str(), r.seconds);
    std::string s = head;
    for (const auto& c : r.checks) {
        s += std::string("        ") + (c.pass ? "ok   " : "FAIL ") + c.name + ": " + c.detail;
        if (!c.pass && !c.known_gap.empty()) s += "  [known gap: " + c.known_gap + "]";
        s += "\n";
    }
    if (!r.error.empty()) s += "        error: " + r.error + "\n";
    return s;
}

}  // namespace designkit::acceptance
