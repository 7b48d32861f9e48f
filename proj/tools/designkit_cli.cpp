// designkit: command-line front end.
//
// Every command accepts --set key.path=value overrides applied to the merged
// input document {"rotor": ..., "spec": ..., "mission": ..., "vehicle": ...,
// "op": ...}. With --out DIR the artifacts are written there; without it the
// primary artifact goes to stdout.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "designkit/acceptance.hpp"
#include "designkit/io.hpp"

namespace dk = designkit;
using dk::io::json;

namespace {

struct Common {
    std::string polar;
    std::string out;
    std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, Common& c, bool with_polar = true) {
    if (with_polar) cmd->add_option("--polar", c.polar, "Polar name (sc1095, naca0012) or CSV path");
    cmd->add_option("--out", c.out, "Output directory; primary artifact goes to stdout when omitted");
    cmd->add_option("--set", c.sets, "Override key.path=value in the merged input document");
}

// Writes name under --out, or prints it when it is the primary artifact and
// no directory was given.
void emit(const Common& c, const std::string& name, const std::string& content, bool primary) {
    if (!c.out.empty()) {
        dk::io::write_file(std::filesystem::path(c.out) / name, content);
    } else if (primary) {
        std::cout << content;
    }
}

json load_optional(const std::string& path) { return path.empty() ? json::object() : dk::io::read_json(path); }

std::string polar_name(const Common& c, const json& doc, const char* fallback) {
    if (!c.polar.empty()) return c.polar;
    if (doc.is_object() && doc.contains("polar")) return doc.at("polar").get<std::string>();
    return fallback;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

dk::flightsim::VehicleParams params_from(const dk::io::VehicleConfig& v) {
    dk::flightsim::VehicleParams p;
    const auto& rotor = v.design.rotor;
    const double vt = dk::rpm2rads(v.design.hover_rpm) * rotor.radius;
    p.radius = rotor.radius;
    p.k_f = v.design.rho_hover * rotor.disk_area() * vt * vt;
    p.mass = v.ledger.gross();
    p.inertia = dk::flightsim::inertia_from_ledger(v.ledger);
    p.ct_hover = p.mass * p.gravity / (4.0 * p.k_f);
    return p;
}

// ---------------------------------------------------------------------------

struct AnalyzeArgs {
    Common c;
    std::string rotor;
    double rpm = 3200.0;
    double v_inf = 0.0;
    double rho = dk::kRhoSeaLevel;
    std::vector<double> collectives;
    int stations = 100;
};

int run_analyze(const AnalyzeArgs& a) {
    json doc = {{"rotor", dk::io::read_json(a.rotor)},
                {"op", {{"rpm", a.rpm}, {"v_inf", a.v_inf}, {"rho", a.rho}}},
                {"collectives_deg", a.collectives},
                {"n_stations", a.stations}};
    dk::io::apply_overrides(doc, a.c.sets);
    const auto geom = dk::io::rotor_from_json(doc.at("rotor"));
    const auto polar = dk::io::resolve_polar(polar_name(a.c, doc, "sc1095"));
    std::ostringstream os;
    dk::io::write_performance_header(os);
    for (double th : doc.at("collectives_deg").get<std::vector<double>>()) {
        json op = doc.at("op");
        op["collective_deg"] = th;
        const auto o = dk::io::op_from_json(op);
        dk::io::write_performance_row(os, o, dk::bemt::evaluate_rotor(geom, o, polar, doc.at("n_stations").get<int>()));
    }
    emit(a.c, "performance.csv", os.str(), true);
    return 0;
}

int run_sweep(const Common& c, const std::string& spec_path) {
    json doc = {{"spec", dk::io::read_json(spec_path)}};
    dk::io::apply_overrides(doc, c.sets);
    const auto spec = dk::io::sweep_from_json(doc.at("spec"));
    const auto polar = dk::io::resolve_polar(polar_name(c, doc.at("spec"), "sc1095"));
    const auto rows = dk::explorer::run_sweep(spec, polar);
    std::ostringstream os;
    dk::io::write_sweep_csv(os, rows);
    emit(c, "sweep.csv", os.str(), true);
    return 0;
}

int run_optimize(const Common& c, const std::string& spec_path) {
    json doc = {{"spec", load_optional(spec_path)}};
    dk::io::apply_overrides(doc, c.sets);
    const auto spec = dk::io::optimization_from_json(doc.at("spec"));
    const auto polar = dk::io::resolve_polar(polar_name(c, doc.at("spec"), "sc1095"));
    const auto r = dk::explorer::optimize(spec, polar);
    const std::pair<const char*, const dk::explorer::Surface*> surfaces[] = {
        {"fm.csv", &r.fm}, {"eta.csv", &r.eta}, {"cost.csv", &r.cost}};
    for (const auto& [name, s] : surfaces) {
        std::ostringstream os;
        dk::io::write_surface_csv(os, r, *s);
        emit(c, name, os.str(), false);
    }
    emit(c, "summary.json", dump(dk::io::optimization_summary(r)), true);
    return 0;
}

struct WingArgs {
    Common c;
    std::string spec;
    double wing_loading = 130.0;
};

int run_wing(const WingArgs& a) {
    json doc = {{"spec", load_optional(a.spec)}};
    if (!doc["spec"].contains("wing_loading")) doc["spec"]["wing_loading"] = a.wing_loading;
    if (!doc["spec"].contains("grid")) doc["spec"]["grid"] = {{"min", 40.0}, {"max", 300.0}, {"step", 5.0}};
    dk::io::apply_overrides(doc, a.c.sets);
    const auto& spec = doc.at("spec");
    const auto in = dk::io::wing_from_json(spec);
    const double ws = spec.at("wing_loading").get<double>();
    const auto curve = dk::wing::power_vs_wing_loading(in, dk::io::number_list(spec.at("grid"), "grid"));
    std::ostringstream os;
    os << "wing_loading_N_m2,power_W\n";
    for (const auto& p : curve.points) os << dk::io::num(p.wing_loading) << ',' << dk::io::num(p.power) << '\n';
    emit(a.c, "wing_power.csv", os.str(), false);

    const auto s = dk::wing::size_biplane(in, ws);
    json out = {{"wing_loading_N_m2", s.wing_loading},
                {"total_area_m2", s.total_area},
                {"wing",
                 {{"area_m2", s.wing.area},
                  {"span_m", s.wing.span},
                  {"root_chord_m", s.wing.root_chord},
                  {"tip_chord_m", s.wing.tip_chord},
                  {"aspect_ratio", s.wing.aspect_ratio},
                  {"mean_chord_m", s.wing.mean_chord},
                  {"airfoil", s.wing.airfoil}}},
                {"monoplane_span_m", s.monoplane_span},
                {"monoplane_aspect_ratio", s.monoplane_aspect_ratio},
                {"gap_to_chord", s.gap_to_chord},
                {"gap_ok", s.gap_ok},
                {"lift_fraction", s.lift_fraction},
                {"stall_wing_loading_N_m2", s.stall_wing_loading},
                {"optimum_wing_loading_N_m2", curve.optimum_wing_loading},
                {"optimum_power_W", curve.optimum_power},
                {"biplane_power_ratio", dk::wing::biplane_power_ratio(in.span_ratio)}};
    emit(a.c, "wing.json", dump(out), true);
    return 0;
}

dk::io::VehicleConfig load_vehicle(const Common& c, const std::string& path) {
    json doc = {{"vehicle", load_optional(path)}};
    dk::io::apply_overrides(doc, c.sets);
    auto v = dk::io::vehicle_from_json(doc.at("vehicle"));
    if (!c.polar.empty()) v.polar = c.polar;
    return v;
}

json budget_json(const dk::powertrain::DesignPointResult& r) {
    const auto& b = r.budget;
    return {{"hover_power_hp", dk::w2hp(b.hover_power)},
            {"cruise_power_hp", dk::w2hp(b.cruise_power)},
            {"margin_fraction", b.margin_fraction},
            {"required_installed_power_hp", dk::w2hp(b.required_installed_power)},
            {"reduction_fraction", b.reduction_fraction},
            {"engine_rpm", b.engine_rpm},
            {"engine_available_power_hp", dk::w2hp(b.engine_available_power)},
            {"hover_thrust_per_rotor_N", r.hover_thrust_per_rotor},
            {"hover_collective_deg", dk::rad2deg(r.hover_trim.collective)},
            {"cruise_thrust_per_rotor_N", r.cruise_thrust_per_rotor},
            {"cruise_collective_deg", dk::rad2deg(r.cruise_trim.collective)},
            {"wing_drag_N", r.wing_drag}};
}

int run_budget(const Common& c, const std::string& path) {
    const auto v = load_vehicle(c, path);
    const auto r = dk::powertrain::design_power_budget(v.design, dk::io::resolve_polar(v.polar));
    emit(c, "budget.json", dump(budget_json(r)), true);
    return 0;
}

int run_gears(const Common& c, const std::string& path) {
    const auto v = load_vehicle(c, path);
    const auto t = dk::powertrain::build_gear_train();
    std::ostringstream os;
    os << "gear,teeth,module_mm,pitch_diameter_mm,effective_module_mm,face_width_mm,addendum_mm,dedendum_mm,bevel\n";
    for (const auto& g : t.gears) {
        os << dk::powertrain::to_string(g.role) << ',' << g.teeth << ',' << dk::io::num(g.module_mm) << ','
           << dk::io::num(g.pitch_diameter_mm) << ',' << dk::io::num(g.effective_module_mm()) << ','
           << dk::io::num(g.face_width_mm) << ',' << dk::io::num(g.addendum_mm) << ','
           << dk::io::num(g.dedendum_mm) << ',' << (g.bevel ? 1 : 0) << '\n';
    }
    emit(c, "gears.csv", os.str(), false);

    const auto r = dk::powertrain::design_power_budget(v.design, dk::io::resolve_polar(v.polar));
    const auto& pinion = t.gear(dk::powertrain::GearRole::E);
    const double engine_rpm = v.design.hover_rpm * v.design.gear_ratio;
    const double need = dk::powertrain::pinion_face_width_required(r.budget.required_installed_power, engine_rpm,
                                                                   pinion, v.agma, v.allowable_mpa);
    json out = {{"overall_ratio", t.overall_ratio()},
                {"min_pinion_teeth", dk::powertrain::min_pinion_teeth(2.0, pinion.pressure_angle)},
                {"pinion_teeth", pinion.teeth},
                {"engine_rpm", engine_rpm},
                {"design_power_hp", dk::w2hp(r.budget.required_installed_power)},
                {"pinion_face_width_required_mm", need},
                {"pinion_face_width_mm", pinion.face_width_mm},
                {"face_width_ok", pinion.face_width_mm >= need}};
    emit(c, "gears.json", dump(out), true);
    return 0;
}

int run_weights(const Common& c, const std::string& path, double start) {
    const auto v = load_vehicle(c, path);
    const double s = start > 0.0 ? start : v.ledger.gross();
    const auto r = dk::powertrain::iterate_gross_weight(v.ledger, v.scaling, s);
    std::ostringstream os;
    dk::io::write_ledger_csv(os, r.ledger);
    emit(c, "ledger.csv", os.str(), true);
    json out = {{"gross_kg", r.gross_kg},
                {"cg_m", r.cg_m},
                {"iterations", r.iterations},
                {"history_kg", r.history},
                {"rotor_radius_m", v.scaling.radius(r.gross_kg)},
                {"wing_area_m2", v.scaling.wing_area(r.gross_kg)}};
    emit(c, "weights.json", dump(out), false);
    return 0;
}

struct SimArgs {
    Common c;
    std::string mission;
    std::string vehicle;
    std::string yaw_model = "secant";
};

int run_simulate(const SimArgs& a) {
    json doc = {{"mission", dk::io::read_json(a.mission)}, {"vehicle", load_optional(a.vehicle)}};
    dk::io::apply_overrides(doc, a.c.sets);
    const auto mission = dk::io::mission_from_json(doc.at("mission"));
    const auto v = dk::io::vehicle_from_json(doc.at("vehicle"));
    auto p = params_from(v);
    if (a.yaw_model == "tangent") p.yaw_model = dk::flightsim::YawModel::tangent;
    const auto polar = dk::io::resolve_polar(a.c.polar.empty() ? v.polar : a.c.polar);
    const dk::flightsim::CtPitchMap map(v.design.rotor, polar,
                                       dk::bemt::at_rpm(v.design.hover_rpm, 0.0, 0.0, v.design.rho_hover));
    const auto r = dk::flightsim::run_mission(mission, p, dk::flightsim::default_gains(p), map);
    std::ostringstream os;
    dk::io::write_trajectory_csv(os, r.log);
    emit(a.c, "trajectory.csv", os.str(), true);
    const auto& last = r.log.back().state.position;
    json out = {{"capture_times_s", r.capture_times},
                {"final_position_m", {last[0], last[1], last[2]}},
                {"max_tracking_error_deg", dk::rad2deg(r.max_tracking_error)},
                {"any_saturation", r.any_saturation},
                {"rows", r.log.size()}};
    emit(a.c, "mission.json", dump(out), false);
    return 0;
}

int run_validate(const std::vector<int>& ids_in, bool strict) {
    namespace acc = dk::acceptance;
    std::vector<int> ids = ids_in;
    if (ids.empty())
        for (int i = 1; i <= acc::kCriteria; ++i) ids.push_back(i);
    const auto ctx = acc::Context::load();
    int failed = 0, known = 0;
    for (int id : ids) {
        const auto r = acc::run_criterion(id, ctx);
        std::cout << acc::format(r) << std::flush;
        if (r.only_known_gaps())
            ++known;
        else if (!r.pass())
            ++failed;
    }
    return (failed > 0 || (strict && known > 0)) ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conceptual design toolkit for a quadrotor biplane VTOL UAV"};
    app.require_subcommand(1);

    AnalyzeArgs an;
    auto* analyze = app.add_subcommand("analyze", "Rotor performance at one or more collectives");
    analyze->add_option("--rotor", an.rotor, "Rotor JSON")->required()->check(CLI::ExistingFile);
    analyze->add_option("--rpm", an.rpm, "Rotor speed, rev/min")->capture_default_str();
    analyze->add_option("--v", an.v_inf, "Axial free-stream speed, m/s")->capture_default_str();
    analyze->add_option("--rho", an.rho, "Air density, kg/m^3")->capture_default_str();
    analyze->add_option("--collective", an.collectives, "Collective pitch, deg (repeatable)")->required();
    analyze->add_option("--stations", an.stations, "Radial stations")->capture_default_str();
    add_common(analyze, an.c);

    Common sw;
    std::string sweep_spec;
    auto* sweep = app.add_subcommand("sweep", "Parameter sweep, long-format CSV");
    sweep->add_option("--spec", sweep_spec, "Sweep JSON, e.g. figures/aspect_ratio.json")->required()->check(CLI::ExistingFile);
    add_common(sweep, sw);

    Common op;
    std::string opt_spec;
    auto* optimize = app.add_subcommand("optimize", "Radius x twist grid optimization");
    optimize->add_option("--spec", opt_spec, "Optimization JSON; defaults to R 0.26-0.53 m by twist -45 to -8 deg")->check(CLI::ExistingFile);
    add_common(optimize, op);

    WingArgs wa;
    auto* wing = app.add_subcommand("wing", "Biplane wing sizing and power versus wing loading");
    wing->add_option("--spec", wa.spec, "Wing JSON")->check(CLI::ExistingFile);
    wing->add_option("--wing-loading", wa.wing_loading, "Chosen wing loading, N/m^2")->capture_default_str();
    add_common(wing, wa.c, false);

    Common ge;
    std::string gear_spec;
    auto* gears = app.add_subcommand("gears", "Gear train table and pinion checks");
    gears->add_option("--spec", gear_spec, "Vehicle JSON")->check(CLI::ExistingFile);
    add_common(gears, ge);

    Common bu;
    std::string budget_spec;
    auto* budget = app.add_subcommand("budget", "Hover and cruise power budget");
    budget->add_option("--spec", budget_spec, "Vehicle JSON")->check(CLI::ExistingFile);
    add_common(budget, bu);

    Common we;
    std::string weight_spec;
    double start = 0.0;
    auto* weights = app.add_subcommand("weights", "Gross-weight fixed-point loop");
    weights->add_option("--spec", weight_spec, "Vehicle JSON")->check(CLI::ExistingFile);
    weights->add_option("--start", start, "Starting gross mass, kg (default: ledger total)");
    add_common(weights, we, false);

    SimArgs sa;
    auto* simulate = app.add_subcommand("simulate", "Waypoint mission with the cascaded PID controller");
    simulate->add_option("--mission", sa.mission, "Mission JSON")->required()->check(CLI::ExistingFile);
    simulate->add_option("--spec", sa.vehicle, "Vehicle JSON")->check(CLI::ExistingFile);
    simulate->add_option("--yaw-model", sa.yaw_model, "Linearized yaw row: secant or tangent")
        ->check(CLI::IsMember({"secant", "tangent"}))
        ->capture_default_str();
    add_common(simulate, sa.c);

    std::vector<int> criteria;
    bool strict = false;
    auto* validate = app.add_subcommand("validate", "Run the acceptance suite");
    validate->add_option("--criterion", criteria, "Criterion number (repeatable)")->check(CLI::Range(1, 10));
    validate->add_flag("--strict", strict, "Treat known gaps as failures");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*analyze) return run_analyze(an);
        if (*sweep) return run_sweep(sw, sweep_spec);
        if (*optimize) return run_optimize(op, opt_spec);
        if (*wing) return run_wing(wa);
        if (*gears) return run_gears(ge, gear_spec);
        if (*budget) return run_budget(bu, budget_spec);
        if (*weights) return run_weights(we, weight_spec, start);
        if (*simulate) return run_simulate(sa);
        if (*validate) return run_validate(criteria, strict);
    } catch (const dk::Error& e) {
        std::cerr << e.to_json().dump() << "\n";
        return e.kind() == dk::ErrorKind::Usage ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "internal"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    }
    return 2;
}
