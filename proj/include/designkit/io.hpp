#pragma once

// JSON configuration readers, CSV writers and dotted-path overrides.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "designkit/airfoil.hpp"
#include "designkit/bemt.hpp"
#include "designkit/error.hpp"
#include "designkit/explorer.hpp"
#include "designkit/flightsim.hpp"
#include "designkit/powertrain.hpp"
#include "designkit/wing.hpp"

#ifndef DESIGNKIT_DATA_DIR
#define DESIGNKIT_DATA_DIR "data"
#endif

namespace designkit::io {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Files and overrides
// ---------------------------------------------------------------------------

inline json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path, {{"path", path}});
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::InvalidSpec, "malformed JSON in " + path + ": " + e.what(), {{"path", path}});
    }
}

// Applies "a.b.c=value". The value is parsed as JSON when possible and kept
// as a string otherwise.
inline void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw Error(ErrorKind::Usage, "override must look like key.path=value", {{"override", assignment}});
    }
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    std::string pointer;
    std::stringstream ss(key);
    std::string part;
    while (std::getline(ss, part, '.')) {
        if (part.empty()) throw Error(ErrorKind::Usage, "empty segment in override key", {{"override", assignment}});
        pointer += "/" + part;
    }
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;
    doc[json::json_pointer(pointer)] = value;
}

inline void apply_overrides(json& doc, const std::vector<std::string>& assignments) {
    for (const auto& a : assignments) apply_override(doc, a);
}

// Bundled polar by name ("sc1095", "naca0012") or a CSV path.
inline airfoil::AirfoilPolar resolve_polar(const std::string& name_or_path) {
    namespace fs = std::filesystem;
    if (fs::exists(name_or_path)) return airfoil::load_polar(name_or_path);
    std::string dir = DESIGNKIT_DATA_DIR;
    if (const char* env = std::getenv("DESIGNKIT_DATA")) dir = env;
    const fs::path bundled = fs::path(dir) / (name_or_path + ".csv");
    if (fs::exists(bundled)) return airfoil::load_polar(bundled.string());
    throw Error(ErrorKind::Io, "unknown polar: " + name_or_path, {{"polar", name_or_path}, {"data_dir", dir}});
}

// ---------------------------------------------------------------------------
// Readers
// ---------------------------------------------------------------------------

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
}

inline std::vector<double> number_list(const json& j, const char* what, double scale = 1.0) {
    std::vector<double> out;
    if (j.is_array()) {
        for (const auto& v : j) out.push_back(v.get<double>() * scale);
    } else if (j.is_object()) {
        explorer::GridAxis ax{j.at("min").get<double>(), j.at("max").get<double>(), j.at("step").get<double>()};
        for (double v : ax.points()) out.push_back(v * scale);
    } else {
        throw Error(ErrorKind::InvalidSpec, std::string(what) + " must be a list or {min,max,step}");
    }
    return out;
}

inline bemt::RadialTable radial_table(const json& j, const char* value_key, double scale) {
    bemt::RadialTable t;
    t.r = j.at("r").get<std::vector<double>>();
    for (double v : j.at(value_key).get<std::vector<double>>()) t.value.push_back(v * scale);
    return t;
}

// {radius_m, n_blades, root_cutout, root_chord_m, tip_chord_m, twist_deg,
// preset_deg} with optional chord_table {r, chord_m} and pitch_table
// {r, pitch_deg}. aspect_ratio plus taper_ratio may replace the two chords.
inline bemt::BladeGeometry rotor_from_json(const json& j) {
    try {
        bemt::BladeGeometry g;
        g.radius = j.at("radius_m").get<double>();
        g.n_blades = get_or(j, "n_blades", 2);
        g.root_cutout = get_or(j, "root_cutout", 0.10);
        g.twist = deg2rad(get_or(j, "twist_deg", 0.0));
        g.preset = deg2rad(get_or(j, "preset_deg", 0.0));
        if (j.contains("aspect_ratio")) {
            const double tr = get_or(j, "taper_ratio", 1.0);
            const double mean = g.radius / j.at("aspect_ratio").get<double>();
            g.tip_chord = 2.0 * mean / (tr + 1.0);
            g.root_chord = tr * g.tip_chord;
        } else if (j.contains("root_chord_m")) {
            g.root_chord = j.at("root_chord_m").get<double>();
            g.tip_chord = get_or(j, "tip_chord_m", g.root_chord);
        }
        if (j.contains("chord_table")) {
            g.chord_table = radial_table(j.at("chord_table"), "chord_m", 1.0);
            g.root_chord = g.chord_table.value.front();
            g.tip_chord = g.chord_table.value.back();
        }
        if (j.contains("pitch_table")) g.pitch_table = radial_table(j.at("pitch_table"), "pitch_deg", deg2rad(1.0));
        g.validate();
        return g;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidSpec, std::string("rotor JSON: ") + e.what());
    }
}

inline json rotor_to_json(const bemt::BladeGeometry& g) {
    json j = {{"radius_m", g.radius},          {"n_blades", g.n_blades},
              {"root_cutout", g.root_cutout},  {"root_chord_m", g.root_chord},
              {"tip_chord_m", g.tip_chord},    {"twist_deg", rad2deg(g.twist)},
              {"preset_deg", rad2deg(g.preset)}};
    return j;
}

// {rpm, v_inf, rho, collective_deg}
inline bemt::OperatingPoint op_from_json(const json& j, double rho_default = kRhoSeaLevel) {
    try {
        bemt::OperatingPoint op = bemt::at_rpm(get_or(j, "rpm", 3200.0), get_or(j, "v_inf", 0.0),
                                               deg2rad(get_or(j, "collective_deg", 0.0)),
                                               get_or(j, "rho", rho_default));
        op.validate();
        return op;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidSpec, std::string("operating point JSON: ") + e.what());
    }
}

inline bool is_angle(explorer::Parameter p) {
    return p == explorer::Parameter::twist || p == explorer::Parameter::collective;
}

// Sweep recipe. Angles (twist, collective values, collectives_deg) in degrees.
inline explorer::SweepSpec sweep_from_json(const json& j) {
    try {
        explorer::SweepSpec s;
        s.base_geometry = rotor_from_json(j.at("rotor"));
        s.base_op = op_from_json(get_or(j, "operating_point", json::object()));
        s.parameter = explorer::parameter_from_string(j.at("parameter").get<std::string>());
        s.values = number_list(j.at("values"), "values", is_angle(s.parameter) ? deg2rad(1.0) : 1.0);
        s.response = explorer::response_from_string(j.at("response").get<std::string>());
        s.couple_preset_to_twist = get_or(j, "couple_preset_to_twist", false);
        if (j.contains("collectives_deg")) s.collectives = number_list(j.at("collectives_deg"), "collectives_deg", deg2rad(1.0));
        if (j.contains("speeds")) s.speeds = number_list(j.at("speeds"), "speeds");
        s.n_stations = get_or(j, "n_stations", 100);
        s.validate();
        return s;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidSpec, std::string("sweep JSON: ") + e.what());
    }
}

inline explorer::OptimizationSpec optimization_from_json(const json& j) {
    try {
        explorer::OptimizationSpec s;
        if (j.contains("radius_grid")) {
            const auto& r = j.at("radius_grid");
            s.radius_grid = {r.at("min").get<double>(), r.at("max").get<double>(), r.at("step").get<double>()};
        }
        if (j.contains("twist_grid_deg")) {
            const auto& t = j.at("twist_grid_deg");
            s.twist_grid = {deg2rad(t.at("min").get<double>()), deg2rad(t.at("max").get<double>()),
                            deg2rad(t.at("step").get<double>())};
        }
        if (j.contains("weights")) {
            s.w_fm = j.at("weights").at("fm").get<double>();
            s.w_eta = j.at("weights").at("eta").get<double>();
        }
        if (j.contains("hover")) s.hover_op = op_from_json(j.at("hover"), kRhoSeaLevel);
        if (j.contains("cruise")) s.cruise_op = op_from_json(j.at("cruise"), kRhoCruise500m);
        s.thrust_constraint = get_or(j, "thrust_constraint_N", s.thrust_constraint);
        s.aspect_ratio = get_or(j, "aspect_ratio", s.aspect_ratio);
        s.taper_ratio = get_or(j, "taper_ratio", s.taper_ratio);
        s.n_blades = get_or(j, "n_blades", s.n_blades);
        s.root_cutout = get_or(j, "root_cutout", s.root_cutout);
        s.n_stations = get_or(j, "n_stations", s.n_stations);
        if (j.contains("cruise_collective_scan_deg")) {
            const auto& c = j.at("cruise_collective_scan_deg");
            s.cruise_theta_min_deg = c.at("min").get<double>();
            s.cruise_theta_max_deg = c.at("max").get<double>();
            s.cruise_theta_step_deg = c.at("step").get<double>();
        }
        s.validate();
        return s;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidSpec, std::string("optimization JSON: ") + e.what());
    }
}

inline wing::WingDesignInputs wing_from_json(const json& j, wing::WingDesignInputs w = {}) {
    try {
        w.gross_weight = get_or(j, "gross_weight_N", w.gross_weight);
        w.cruise_speed = get_or(j, "cruise_speed", w.cruise_speed);
        w.stall_speed = get_or(j, "stall_speed", w.stall_speed);
        w.rho = get_or(j, "rho", w.rho);
        w.cd0 = get_or(j, "cd0", w.cd0);
        w.oswald = get_or(j, "oswald", w.oswald);
        w.cl_max = get_or(j, "cl_max", w.cl_max);
        w.aspect_ratio = get_or(j, "aspect_ratio", w.aspect_ratio);
        w.taper = get_or(j, "taper", w.taper);
        w.span_ratio = get_or(j, "span_ratio", w.span_ratio);
        w.rotor_station = get_or(j, "rotor_station_m", w.rotor_station);
        w.gap = get_or(j, "gap_m", w.gap);
        w.airfoil = get_or(j, "airfoil", w.airfoil);
        w.validate();
        return w;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidSpec, std::string("wing JSON: ") + e.what());
    }
}

inline powertrain::Scaling scaling_from_string(const std::string& s) {
    if (s == "fixed") return powertrain::Scaling::fixed;
    if (s == "rotor") return powertrain::Scaling::rotor;
    if (s == "wing") return powertrain::Scaling::wing;
    throw Error(ErrorKind::InvalidSpec, "unknown scaling: " + s);
}

inline const char* to_string(powertrain::Scaling s) {
    switch (s) {
        case powertrain::Scaling::fixed: return "fixed";
        case powertrain::Scaling::rotor: return "rotor";
        case powertrain::Scaling::wing: return "wing";
    }
    return "?";
}

struct VehicleConfig {
    powertrain::VehicleDesign design;
    powertrain::WeightLedger ledger = powertrain::baseline_ledger();
    powertrain::ScalingModel scaling;
    powertrain::AgmaFactors agma;
    double allowable_mpa = 200.0;
    std::string polar = "sc1095";
};

inline VehicleConfig vehicle_from_json(const json& j) {
    try {
        VehicleConfig c;
        auto& d = c.design;
        d.gross_mass = get_or(j, "gross_mass_kg", d.gross_mass);
        if (j.contains("rotor")) d.rotor = rotor_from_json(j.at("rotor"));
        d.hover_rpm = get_or(j, "hover_rpm", d.hover_rpm);
        d.cruise_rpm = get_or(j, "cruise_rpm", d.cruise_rpm);
        d.cruise_speed = get_or(j, "cruise_speed", d.cruise_speed);
        d.rho_hover = get_or(j, "rho_hover", d.rho_hover);
        d.rho_cruise = get_or(j, "rho_cruise", d.rho_cruise);
        d.margin = get_or(j, "margin", d.margin);
        d.gear_ratio = get_or(j, "gear_ratio", d.gear_ratio);
        d.wing_loading = get_or(j, "wing_loading", d.wing_loading);
        d.n_stations = get_or(j, "n_stations", d.n_stations);
        if (j.contains("wing")) d.wing = wing_from_json(j.at("wing"), d.wing);
        if (j.contains("engine")) {
            const auto& e = j.at("engine");
            d.engine.name = get_or(e, "name", d.engine.name);
            d.engine.rated_hp = get_or(e, "rated_hp", d.engine.rated_hp);
            d.engine.rated_rpm = get_or(e, "rated_rpm", d.engine.rated_rpm);
            d.engine.mass_kg = get_or(e, "mass_kg", d.engine.mass_kg);
            d.engine.rpm_min = get_or(e, "rpm_min", d.engine.rpm_min);
            d.engine.rpm_max = get_or(e, "rpm_max", d.engine.rpm_max);
        }
        if (j.contains("ledger")) {
            c.ledger.entries.clear();
            for (const auto& e : j.at("ledger")) {
                c.ledger.entries.push_back({e.at("component").get<std::string>(), e.at("unit_kg").get<double>(),
                                            get_or(e, "qty", 1), scaling_from_string(get_or(e, "scaling", std::string("fixed"))),
                                            get_or(e, "station_m", 0.0)});
            }
            c.ledger.validate();
        }
        if (j.contains("scaling")) {
            const auto& s = j.at("scaling");
            c.scaling.reference_gross_kg = get_or(s, "reference_gross_kg", c.scaling.reference_gross_kg);
            c.scaling.reference_radius_m = get_or(s, "reference_radius_m", c.scaling.reference_radius_m);
            c.scaling.reference_wing_area_m2 = get_or(s, "reference_wing_area_m2", c.scaling.reference_wing_area_m2);
        }
        if (j.contains("gears")) {
            const auto& g = j.at("gears");
            c.agma.k_v = get_or(g, "k_v", c.agma.k_v);
            c.agma.k_o = get_or(g, "k_o", c.agma.k_o);
            c.agma.k_m = get_or(g, "k_m", c.agma.k_m);
            c.agma.k_f = get_or(g, "k_f", c.agma.k_f);
            c.allowable_mpa = get_or(g, "allowable_mpa", c.allowable_mpa);
        }
        c.polar = get_or(j, "polar", c.polar);
        return c;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidSpec, std::string("vehicle JSON: ") + e.what());
    }
}

// {waypoints: [[x,y,z,psi_deg]...], capture_radius_m, dt_s, timeout_s, hold_s}
inline flightsim::MissionSpec mission_from_json(const json& j) {
    try {
        flightsim::MissionSpec m;
        for (const auto& w : j.at("waypoints")) {
            if (w.size() != 4) throw Error(ErrorKind::InvalidSpec, "waypoints are [x, y, z, psi_deg]");
            m.waypoints.push_back({{w[0].get<double>(), w[1].get<double>(), w[2].get<double>()},
                                   deg2rad(w[3].get<double>())});
        }
        m.capture_radius = get_or(j, "capture_radius_m", m.capture_radius);
        m.dt = get_or(j, "dt_s", m.dt);
        m.timeout = get_or(j, "timeout_s", m.timeout);
        m.hold_time = get_or(j, "hold_s", m.hold_time);
        m.settle_window = get_or(j, "settle_window_s", m.settle_window);
        if (j.contains("initial_position")) {
            const auto p = j.at("initial_position").get<std::vector<double>>();
            if (p.size() != 3) throw Error(ErrorKind::InvalidSpec, "initial_position is [x, y, z]");
            m.initial.position = {p[0], p[1], p[2]};
        }
        m.validate();
        return m;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidSpec, std::string("mission JSON: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// CSV writers
// ---------------------------------------------------------------------------

inline std::string num(double v) {
    if (!std::isfinite(v)) return "NA";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline void write_performance_header(std::ostream& os) {
    os << "theta0_deg,v_inf,rpm,CT,CP,T_N,P_W,FM,PL,eta_p\n";
}

inline void write_performance_row(std::ostream& os, const bemt::OperatingPoint& op, const bemt::RotorPerformance& p) {
    os << num(rad2deg(op.collective)) << ',' << num(op.v_inf) << ',' << num(rads2rpm(op.omega)) << ',' << num(p.CT)
       << ',' << num(p.CP) << ',' << num(p.thrust) << ',' << num(p.power) << ','
       << (p.fm_applicable ? num(p.fm) : "NA") << ',' << (p.fm_applicable ? num(p.power_loading) : "NA") << ','
       << (p.eta_applicable ? num(p.eta_p) : "NA") << '\n';
}

inline void write_sweep_csv(std::ostream& os, const std::vector<explorer::SweepRow>& rows) {
    os << "param_name,param_value,x,y\n";
    for (const auto& r : rows) os << r.param_name << ',' << num(r.param_value) << ',' << num(r.x) << ',' << num(r.y) << '\n';
}

// Matrix with twist (deg) across and radius (m) down.
inline void write_surface_csv(std::ostream& os, const explorer::OptimizationResult& r, const explorer::Surface& s) {
    os << "radius_m\\twist_deg";
    for (double t : r.twists) os << ',' << num(rad2deg(t));
    os << '\n';
    for (std::size_t i = 0; i < s.rows; ++i) {
        os << num(r.radii[i]);
        for (std::size_t j = 0; j < s.cols; ++j) os << ',' << num(s(i, j));
        os << '\n';
    }
}

inline json optimization_summary(const explorer::OptimizationResult& r) {
    return {{"R_star_m", r.r_star}, {"twist_star_deg", rad2deg(r.twist_star)}, {"cost_star", r.cost_star}};
}

inline void write_ledger_csv(std::ostream& os, const powertrain::WeightLedger& l) {
    os << "component,unit_kg,qty,total_kg\n";
    for (const auto& e : l.entries) os << e.name << ',' << num(e.unit_kg) << ',' << e.qty << ',' << num(e.total_kg()) << '\n';
}

inline void write_trajectory_csv(std::ostream& os, const std::vector<flightsim::LogRow>& log) {
    os << "t,x,y,z,phi,theta,psi,T,l,m,n,ct1,ct2,ct3,ct4,theta01,theta02,theta03,theta04\n";
    for (const auto& r : log) {
        os << num(r.t);
        for (double v : r.state.position) os << ',' << num(v);
        for (double v : r.state.euler) os << ',' << num(v);
        os << ',' << num(r.command.thrust);
        for (double v : r.command.moment) os << ',' << num(v);
        for (double v : r.ct) os << ',' << num(v);
        for (double v : r.theta0) os << ',' << num(v);
        os << '\n';
    }
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create " + path.parent_path().string() + ": " + ec.message());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string(), {{"path", path.string()}});
    out << content;
}

}  // namespace designkit::io
