#pragma once

// Design-space studies on top of the rotor solver: one-parameter sweeps,
// collective trim to a thrust target, and the weighted radius x twist grid
// search that trades hover figure of merit against cruise efficiency.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "designkit/bemt.hpp"
#include "designkit/error.hpp"
#include "designkit/parallel.hpp"
#include "designkit/units.hpp"

namespace designkit::explorer {

using airfoil::AirfoilPolar;
using bemt::BladeGeometry;
using bemt::OperatingPoint;
using bemt::RotorPerformance;

// ---------------------------------------------------------------------------
// Collective trim
// ---------------------------------------------------------------------------

struct TrimOptions {
    double theta_min_deg = -10.0;
    double theta_max_deg = 30.0;
    double step_deg = 1.0;
    double tolerance_n = 1e-3;
    int n_stations = 100;
};

struct TrimResult {
    double collective = 0.0;  // rad
    RotorPerformance perf;
};

// Scans the collective upward on a fixed degree grid until the thrust first
// reaches the target, stopping at the first positive-thrust decrease (stall), then
// refines inside the bracket with an Illinois false-position iteration.
inline TrimResult trim_collective(const BladeGeometry& geom, const OperatingPoint& op,
                                  const AirfoilPolar& polar, double target_thrust,
                                  const TrimOptions& opt = {}) {
    auto eval = [&](double theta_rad) {
        OperatingPoint o = op;
        o.collective = theta_rad;
        return bemt::evaluate_rotor(geom, o, polar, opt.n_stations);
    };

    const int steps = int(std::lround((opt.theta_max_deg - opt.theta_min_deg) / opt.step_deg));
    double prev_theta = 0.0;
    RotorPerformance prev{};
    double t_max = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= steps; ++k) {
        const double theta = deg2rad(opt.theta_min_deg + k * opt.step_deg);
        const RotorPerformance cur = eval(theta);
        if (std::abs(cur.thrust - target_thrust) < opt.tolerance_n) return {theta, cur};
        if (k == 0 && cur.thrust > target_thrust) {
            if (opt.theta_min_deg > -30.0) {
                TrimOptions wider = opt;
                wider.theta_min_deg = -30.0;
                return trim_collective(geom, op, polar, target_thrust, wider);
            }
            throw Error(ErrorKind::UnreachableThrust, "target thrust below the thrust at the lowest collective",
                        {{"target_N", target_thrust}, {"T_min_N", cur.thrust}});
        }
        // Past stall. The windmill branch (negative thrust) is not monotone and
        // does not count.
        if (k > 0 && prev.thrust > 0.0 && cur.thrust < prev.thrust) break;
        t_max = std::max(t_max, cur.thrust);
        if (k > 0 && cur.thrust > target_thrust) {
            double a = prev_theta, fa = prev.thrust - target_thrust;
            double b = theta, fb = cur.thrust - target_thrust;
            RotorPerformance pb = cur;
            int side = 0;
            for (int it = 0; it < 100; ++it) {
                double m = (a * fb - b * fa) / (fb - fa);
                if (!(m > std::min(a, b) && m < std::max(a, b))) m = 0.5 * (a + b);
                const RotorPerformance pm = eval(m);
                const double fm = pm.thrust - target_thrust;
                if (std::abs(fm) < opt.tolerance_n || std::abs(b - a) < 1e-12) return {m, pm};
                if ((fm < 0.0) == (fa < 0.0)) {
                    a = m;
                    fa = fm;
                    if (side == -1) fb *= 0.5;
                    side = -1;
                } else {
                    b = m;
                    fb = fm;
                    pb = pm;
                    if (side == 1) fa *= 0.5;
                    side = 1;
                }
            }
            return {b, pb};
        }
        prev_theta = theta;
        prev = cur;
    }
    throw Error(ErrorKind::UnreachableThrust, "target thrust exceeds the pre-stall maximum",
                {{"target_N", target_thrust}, {"T_max_N", t_max}});
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

enum class Parameter { aspect_ratio, taper_ratio, twist, rpm, radius, collective };
enum class Response { pl_vs_t, eta_vs_v, thrust, power };

inline const char* to_string(Parameter p) {
    switch (p) {
        case Parameter::aspect_ratio: return "aspect_ratio";
        case Parameter::taper_ratio: return "taper_ratio";
        case Parameter::twist: return "twist";
        case Parameter::rpm: return "rpm";
        case Parameter::radius: return "radius";
        case Parameter::collective: return "collective";
    }
    return "?";
}

inline Parameter parameter_from_string(const std::string& s) {
    for (auto p : {Parameter::aspect_ratio, Parameter::taper_ratio, Parameter::twist, Parameter::rpm,
                   Parameter::radius, Parameter::collective}) {
        if (s == to_string(p)) return p;
    }
    throw Error(ErrorKind::InvalidSpec, "unknown sweep parameter: " + s);
}

inline const char* to_string(Response r) {
    switch (r) {
        case Response::pl_vs_t: return "PL_vs_T";
        case Response::eta_vs_v: return "eta_vs_V";
        case Response::thrust: return "thrust";
        case Response::power: return "power";
    }
    return "?";
}

inline Response response_from_string(const std::string& s) {
    for (auto r : {Response::pl_vs_t, Response::eta_vs_v, Response::thrust, Response::power}) {
        if (s == to_string(r)) return r;
    }
    throw Error(ErrorKind::InvalidSpec, "unknown sweep response: " + s);
}

// Parameter values are SI except rpm (rev/min); angles in rad.
struct SweepSpec {
    BladeGeometry base_geometry;
    OperatingPoint base_op;
    Parameter parameter = Parameter::aspect_ratio;
    std::vector<double> values;
    Response response = Response::pl_vs_t;
    bool couple_preset_to_twist = false;  // preset = -twist
    std::vector<double> collectives;      // rad, curve driver for every response but eta_vs_V
    std::vector<double> speeds;           // m/s, curve driver for eta_vs_V
    int n_stations = 100;

    void validate() const {
        if (values.empty()) throw Error(ErrorKind::InvalidSpec, "sweep values must be non-empty");
        if (response == Response::eta_vs_v && speeds.empty()) {
            throw Error(ErrorKind::InvalidSpec, "eta_vs_V sweep needs a speed list");
        }
        if (response != Response::eta_vs_v && collectives.empty()) {
            throw Error(ErrorKind::InvalidSpec, "sweep needs a collective list");
        }
        for (double v : speeds) {
            if (!(v > 0.0)) throw Error(ErrorKind::InvalidSpec, "sweep speeds must be positive");
        }
        base_geometry.validate();
        base_op.validate();
    }
};

struct SweepRow {
    std::string param_name;
    double param_value = 0.0;  // degrees for angles, rev/min for rpm, SI otherwise
    double x = 0.0;
    double y = 0.0;
    bool ok = true;  // false marks a solver gap; x and y are NaN there
    std::string error;
};

// Applies one swept parameter to a linear-law geometry or the operating point.
inline void apply_parameter(Parameter p, double value, bool couple, BladeGeometry& g, OperatingPoint& op) {
    const bool tabulated = !g.chord_table.empty();
    auto need_linear = [&](const char* what) {
        if (tabulated) throw Error(ErrorKind::InvalidSpec, std::string(what) + " sweep needs a linear chord law");
    };
    switch (p) {
        case Parameter::aspect_ratio: {
            need_linear("aspect-ratio");
            const double tr = g.taper_ratio();
            g.tip_chord = 2.0 * (g.radius / value) / (tr + 1.0);
            g.root_chord = tr * g.tip_chord;
            break;
        }
        case Parameter::taper_ratio: {
            need_linear("taper");
            const double mean = g.mean_chord();
            g.tip_chord = 2.0 * mean / (value + 1.0);
            g.root_chord = value * g.tip_chord;
            break;
        }
        case Parameter::twist:
            g.twist = value;
            break;
        case Parameter::radius: {
            // Aspect ratio is held, so chords scale with radius.
            need_linear("radius");
            const double scale = value / g.radius;
            g.radius = value;
            g.root_chord *= scale;
            g.tip_chord *= scale;
            break;
        }
        case Parameter::rpm:
            op.omega = rpm2rads(value);
            break;
        case Parameter::collective:
            op.collective = value;
            break;
    }
    if (couple) g.preset = -g.twist;
}

inline double display_value(Parameter p, double v) {
    return (p == Parameter::twist || p == Parameter::collective) ? rad2deg(v) : v;
}

inline std::vector<SweepRow> run_sweep(const SweepSpec& spec, const AirfoilPolar& polar) {
    spec.validate();
    const bool by_speed = spec.response == Response::eta_vs_v;
    const std::size_t per_value = by_speed ? spec.speeds.size() : spec.collectives.size();
    const std::size_t n = spec.values.size() * per_value;
    std::vector<SweepRow> rows(n);
    parallel_for(n, [&](std::size_t idx) {
        const std::size_t vi = idx / per_value;
        const std::size_t pi = idx % per_value;
        BladeGeometry g = spec.base_geometry;
        OperatingPoint op = spec.base_op;
        SweepRow& row = rows[idx];
        row.param_name = to_string(spec.parameter);
        row.param_value = display_value(spec.parameter, spec.values[vi]);
        try {
            apply_parameter(spec.parameter, spec.values[vi], spec.couple_preset_to_twist, g, op);
            if (by_speed) {
                op.v_inf = spec.speeds[pi];
            } else {
                op.collective = spec.collectives[pi];
            }
            const RotorPerformance perf = bemt::evaluate_rotor(g, op, polar, spec.n_stations);
            switch (spec.response) {
                case Response::pl_vs_t:
                    row.x = perf.thrust;
                    row.y = perf.power_loading;
                    break;
                case Response::eta_vs_v:
                    row.x = op.v_inf;
                    row.y = perf.eta_p;
                    break;
                case Response::thrust:
                    row.x = rad2deg(op.collective);
                    row.y = perf.thrust;
                    break;
                case Response::power:
                    row.x = rad2deg(op.collective);
                    row.y = perf.power;
                    break;
            }
        } catch (const Error& e) {
            row.ok = false;
            row.x = row.y = std::numeric_limits<double>::quiet_NaN();
            row.error = e.what();
        }
    });
    return rows;
}

// ---------------------------------------------------------------------------
// Weighted radius x twist optimization
// ---------------------------------------------------------------------------

struct GridAxis {
    double min = 0.0;
    double max = 0.0;
    double step = 1.0;

    // Points are min + i*step, so the grid never drifts from accumulated adds.
    std::vector<double> points() const {
        if (!(step > 0.0) || !(max >= min)) throw Error(ErrorKind::InvalidSpec, "grid axis needs step > 0, max >= min");
        const int n = int(std::floor((max - min) / step + 1e-9)) + 1;
        std::vector<double> v(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) v[std::size_t(i)] = min + i * step;
        return v;
    }
};

struct OptimizationSpec {
    GridAxis radius_grid{0.26, 0.53, 0.01};                          // m
    GridAxis twist_grid{deg2rad(-45.0), deg2rad(-8.0), deg2rad(1)};  // rad
    double w_fm = 0.3;
    double w_eta = 0.7;
    OperatingPoint hover_op = bemt::at_rpm(3200.0, 0.0, 0.0, kRhoSeaLevel);
    OperatingPoint cruise_op = bemt::at_rpm(2000.0, 20.0, 0.0, kRhoCruise500m);
    double thrust_constraint = 50.0;  // N per rotor
    double aspect_ratio = 12.0;
    double taper_ratio = 5.0 / 3.0;
    int n_blades = 2;
    double root_cutout = 0.10;
    // Cruise collective: the ηp-maximizing point with positive thrust on this scan.
    double cruise_theta_min_deg = -10.0;
    double cruise_theta_max_deg = 40.0;
    double cruise_theta_step_deg = 1.0;
    int n_stations = 60;

    void validate() const {
        if (!(w_fm >= 0.0 && w_eta >= 0.0) || std::abs(w_fm + w_eta - 1.0) > 1e-12) {
            throw Error(ErrorKind::InvalidSpec, "weights must be non-negative and sum to 1",
                        {{"w_fm", w_fm}, {"w_eta", w_eta}});
        }
        radius_grid.points();
        twist_grid.points();
        if (!(radius_grid.min > 0.0)) throw Error(ErrorKind::InvalidSpec, "radius grid must be positive");
        if (!(thrust_constraint > 0.0)) throw Error(ErrorKind::InvalidSpec, "thrust constraint must be positive");
        if (!(cruise_op.v_inf > 0.0)) throw Error(ErrorKind::InvalidSpec, "cruise speed must be positive");
        if (!(cruise_theta_step_deg > 0.0) || cruise_theta_max_deg < cruise_theta_min_deg) {
            throw Error(ErrorKind::InvalidSpec, "cruise collective scan is degenerate");
        }
        hover_op.validate();
        cruise_op.validate();
    }
};

// Row-major matrix indexed [radius][twist].
struct Surface {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Surface() = default;
    Surface(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}
    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

struct CellIndex {
    std::size_t radius = 0;
    std::size_t twist = 0;
};

enum CellFlag : unsigned { kCellOk = 0, kHoverTrimFailed = 1, kNoCruiseThrust = 2 };

struct OptimizationResult {
    std::vector<double> radii;   // m
    std::vector<double> twists;  // rad
    Surface fm, eta, cost;
    Surface hover_collective, cruise_collective;  // rad, NaN where unavailable
    std::vector<unsigned> flags;                  // CellFlag bits, row-major
    CellIndex best;
    double r_star = 0.0;
    double twist_star = 0.0;
    double cost_star = 0.0;
};

// Largest finite value; ties go to the smaller radius, then the smaller |twist|.
inline std::optional<CellIndex> argmax_cell(const Surface& s, const std::vector<double>& twists) {
    std::optional<CellIndex> best;
    double bv = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.rows; ++i) {
        for (std::size_t j = 0; j < s.cols; ++j) {
            const double v = s(i, j);
            if (!std::isfinite(v)) continue;
            bool take = !best || v > bv;
            if (best && v == bv && i == best->radius && std::abs(twists[j]) < std::abs(twists[best->twist])) take = true;
            if (take) {
                best = CellIndex{i, j};
                bv = v;
            }
        }
    }
    return best;
}

inline OptimizationResult optimize(const OptimizationSpec& spec, const AirfoilPolar& polar) {
    spec.validate();
    OptimizationResult res;
    res.radii = spec.radius_grid.points();
    res.twists = spec.twist_grid.points();
    const std::size_t nr = res.radii.size(), nt = res.twists.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    res.fm = Surface(nr, nt);
    res.eta = Surface(nr, nt);
    res.cost = Surface(nr, nt);
    res.hover_collective = Surface(nr, nt, nan);
    res.cruise_collective = Surface(nr, nt, nan);
    res.flags.assign(nr * nt, kCellOk);

    TrimOptions trim;
    trim.n_stations = spec.n_stations;
    const int n_cruise =
        int(std::floor((spec.cruise_theta_max_deg - spec.cruise_theta_min_deg) / spec.cruise_theta_step_deg + 1e-9)) + 1;

    parallel_for(nr * nt, [&](std::size_t idx) {
        const std::size_t i = idx / nt, j = idx % nt;
        const double tw = res.twists[j];
        const BladeGeometry g = bemt::planform(res.radii[i], spec.aspect_ratio, spec.taper_ratio, tw, -tw,
                                               spec.n_blades, spec.root_cutout);
        double fm = 0.0;
        try {
            const TrimResult t = trim_collective(g, spec.hover_op, polar, spec.thrust_constraint, trim);
            fm = t.perf.fm;
            res.hover_collective(i, j) = t.collective;
        } catch (const Error&) {
            res.flags[idx] |= kHoverTrimFailed;
        }
        double eta = 0.0;
        bool found = false;
        for (int k = 0; k < n_cruise; ++k) {
            OperatingPoint op = spec.cruise_op;
            op.collective = deg2rad(spec.cruise_theta_min_deg + k * spec.cruise_theta_step_deg);
            try {
                const RotorPerformance p = bemt::evaluate_rotor(g, op, polar, spec.n_stations);
                if (p.thrust > 0.0 && (!found || p.eta_p > eta)) {
                    eta = p.eta_p;
                    res.cruise_collective(i, j) = op.collective;
                    found = true;
                }
            } catch (const Error&) {
                // A failed scan point is skipped; the cell is judged on the rest.
            }
        }
        if (!found) res.flags[idx] |= kNoCruiseThrust;
        res.fm(i, j) = fm;
        res.eta(i, j) = eta;
        res.cost(i, j) = (res.flags[idx] & kHoverTrimFailed) ? -std::numeric_limits<double>::infinity()
                                                             : spec.w_fm * fm + spec.w_eta * eta;
    });

    const auto best = argmax_cell(res.cost, res.twists);
    if (!best) {
        throw Error(ErrorKind::Infeasible, "no grid cell can meet the hover thrust constraint",
                    {{"thrust_constraint_N", spec.thrust_constraint}, {"cells", nr * nt}});
    }
    res.best = *best;
    res.r_star = res.radii[best->radius];
    res.twist_star = res.twists[best->twist];
    res.cost_star = res.cost(best->radius, best->twist);
    return res;
}

}  // namespace designkit::explorer
