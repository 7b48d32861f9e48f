#pragma once

// Power budget and engine check, spur/bevel gear sizing, and the gross-weight
// fixed-point loop.

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "designkit/bemt.hpp"
#include "designkit/error.hpp"
#include "designkit/explorer.hpp"
#include "designkit/units.hpp"
#include "designkit/wing.hpp"

namespace designkit::powertrain {

using airfoil::AirfoilPolar;
using bemt::BladeGeometry;
using bemt::RotorPerformance;

// ---------------------------------------------------------------------------
// Engine and power budget
// ---------------------------------------------------------------------------

struct EngineRating {
    std::string name = "OS 105HZ";
    double rated_hp = 3.75;
    double rated_rpm = 15000.0;
    double mass_kg = 0.596;
    double rpm_min = 2000.0;
    double rpm_max = 16500.0;

    // Constant torque up to the rated speed, flat rated power above it.
    double power_available_w(double rpm) const {
        if (rpm < rpm_min || rpm > rpm_max) {
            throw Error(ErrorKind::InvalidInput, "engine speed outside the practical range",
                        {{"rpm", rpm}, {"rpm_min", rpm_min}, {"rpm_max", rpm_max}});
        }
        return hp2w(rated_hp) * std::min(rpm, rated_rpm) / rated_rpm;
    }
};

struct PowerBudget {
    double hover_power = 0.0;   // W, all rotors
    double cruise_power = 0.0;  // W, all rotors
    double margin_fraction = 0.10;
    double required_installed_power = 0.0;  // W
    double reduction_fraction = 0.0;
    double engine_rpm = 0.0;
    double engine_available_power = 0.0;  // W at engine_rpm
};

inline double total_power(const std::vector<RotorPerformance>& rotors) {
    double p = 0.0;
    for (const auto& r : rotors) p += r.power;
    return p;
}

// Throws EngineInadequate when the margined hover power exceeds what the
// engine delivers at engine_rpm.
inline PowerBudget power_budget(const std::vector<RotorPerformance>& hover,
                                const std::vector<RotorPerformance>& cruise, double margin,
                                const EngineRating& engine, double engine_rpm) {
    if (hover.empty() || cruise.empty()) throw Error(ErrorKind::InvalidInput, "power budget needs rotor data");
    if (!(margin >= 0.0)) throw Error(ErrorKind::InvalidInput, "margin must be non-negative");
    PowerBudget b;
    b.hover_power = total_power(hover);
    b.cruise_power = total_power(cruise);
    if (!(b.hover_power > 0.0)) throw Error(ErrorKind::InvalidInput, "hover power must be positive");
    b.margin_fraction = margin;
    b.required_installed_power = b.hover_power * (1.0 + margin);
    b.reduction_fraction = 1.0 - b.cruise_power / b.hover_power;
    b.engine_rpm = engine_rpm;
    b.engine_available_power = engine.power_available_w(engine_rpm);
    if (b.required_installed_power > b.engine_available_power) {
        throw Error(ErrorKind::EngineInadequate, "required power exceeds engine output",
                    {{"required_hp", w2hp(b.required_installed_power)},
                     {"available_hp", w2hp(b.engine_available_power)},
                     {"engine_rpm", engine_rpm}});
    }
    return b;
}

// Selected proprotor: R = 0.38 m, chords 47.5 mm root and 28.5 mm tip.
inline BladeGeometry design_rotor() {
    BladeGeometry g;
    g.radius = 0.38;
    g.root_chord = 0.0475;
    g.tip_chord = 0.0285;
    g.twist = deg2rad(-24.0);
    g.preset = deg2rad(24.0);
    g.validate();
    return g;
}

// Vehicle-level design point: rotors trimmed to weight/4 in hover, and to a
// quarter of the wing drag in cruise.
struct VehicleDesign {
    double gross_mass = 18.5;  // kg
    int n_rotors = 4;
    BladeGeometry rotor = design_rotor();
    double hover_rpm = 3200.0;
    double cruise_rpm = 2000.0;
    double cruise_speed = 20.0;
    double rho_hover = kRhoSeaLevel;
    double rho_cruise = kRhoCruise500m;
    wing::WingDesignInputs wing;
    double wing_loading = 130.0;  // N/m^2
    double margin = 0.10;
    double gear_ratio = 4.0;  // engine rpm / rotor rpm
    EngineRating engine;
    int n_stations = 100;
};

struct DesignPointResult {
    PowerBudget budget;
    explorer::TrimResult hover_trim;   // per rotor
    explorer::TrimResult cruise_trim;  // per rotor
    double hover_thrust_per_rotor = 0.0;
    double cruise_thrust_per_rotor = 0.0;
    double wing_drag = 0.0;  // N
};

inline DesignPointResult design_power_budget(const VehicleDesign& v, const AirfoilPolar& polar) {
    if (v.n_rotors < 1) throw Error(ErrorKind::InvalidInput, "need at least one rotor");
    DesignPointResult out;
    const double weight = v.gross_mass * kGravity;
    out.hover_thrust_per_rotor = weight / v.n_rotors;

    explorer::TrimOptions trim;
    trim.n_stations = v.n_stations;
    out.hover_trim = explorer::trim_collective(v.rotor, bemt::at_rpm(v.hover_rpm, 0.0, 0.0, v.rho_hover), polar,
                                               out.hover_thrust_per_rotor, trim);

    wing::WingDesignInputs w = v.wing;
    w.gross_weight = weight;
    w.cruise_speed = v.cruise_speed;
    out.wing_drag = wing::cruise_power(w, v.wing_loading) / v.cruise_speed;
    out.cruise_thrust_per_rotor = out.wing_drag / v.n_rotors;
    trim.theta_max_deg = 40.0;
    out.cruise_trim = explorer::trim_collective(v.rotor, bemt::at_rpm(v.cruise_rpm, v.cruise_speed, 0.0, v.rho_cruise),
                                                polar, out.cruise_thrust_per_rotor, trim);

    const std::vector<RotorPerformance> hover(std::size_t(v.n_rotors), out.hover_trim.perf);
    const std::vector<RotorPerformance> cruise(std::size_t(v.n_rotors), out.cruise_trim.perf);
    out.budget = power_budget(hover, cruise, v.margin, v.engine, v.hover_rpm * v.gear_ratio);
    return out;
}

// ---------------------------------------------------------------------------
// Gears
// ---------------------------------------------------------------------------

// Smallest pinion tooth count free of involute interference when meshing with
// a gear `gear_ratio` times larger. addendum_factor is the addendum in modules.
inline int min_pinion_teeth(double gear_ratio, double pressure_angle, double addendum_factor = 1.0) {
    if (!(gear_ratio >= 1.0)) throw Error(ErrorKind::InvalidInput, "gear ratio must be >= 1");
    if (!(pressure_angle > 0.0 && pressure_angle <= kPi / 2) || !(addendum_factor > 0.0)) {
        throw Error(ErrorKind::InvalidInput, "pressure angle must lie in (0, 90 deg], addendum > 0");
    }
    const double g = 1.0 / gear_ratio;
    const double s = std::sin(pressure_angle);
    const double bound = 2.0 * addendum_factor * g / (std::sqrt(1.0 + g * (g + 2.0) * s * s) - 1.0);
    return int(std::ceil(bound - 1e-9));
}

// Lewis form factor, 20 deg full-depth teeth, interpolated in tooth count.
inline double lewis_y(int teeth) {
    static constexpr std::array<std::pair<int, double>, 25> table{{
        {12, 0.245}, {13, 0.261}, {14, 0.277}, {15, 0.290}, {16, 0.296}, {17, 0.303}, {18, 0.309},
        {19, 0.314}, {20, 0.322}, {21, 0.328}, {22, 0.331}, {24, 0.337}, {26, 0.346}, {28, 0.353},
        {30, 0.359}, {34, 0.371}, {38, 0.384}, {43, 0.397}, {50, 0.409}, {60, 0.422}, {75, 0.435},
        {100, 0.447}, {150, 0.460}, {300, 0.472}, {400, 0.480},
    }};
    if (teeth < table.front().first) {
        throw Error(ErrorKind::InvalidInput, "Lewis table starts at 12 teeth", {{"teeth", teeth}});
    }
    if (teeth >= table.back().first) return table.back().second;
    for (std::size_t i = 1; i < table.size(); ++i) {
        if (teeth <= table[i].first) {
            const auto [n0, y0] = table[i - 1];
            const auto [n1, y1] = table[i];
            return y0 + (y1 - y0) * double(teeth - n0) / double(n1 - n0);
        }
    }
    return table.back().second;
}

struct AgmaFactors {
    double k_v = 1.4;   // dynamic
    double k_o = 1.25;  // overload
    double k_m = 1.3;   // load distribution
    double k_f = 1.1;   // stress concentration
    double product() const { return k_v * k_o * k_m * k_f; }
};

// Face width from the AGMA bending equation in module form:
// b = F_t K / (sigma m Y). Newtons, millimetres and MPa; result rounded up
// to the next 0.1 mm.
inline double agma_face_width(double tangential_load_n, double module_mm, double lewis, const AgmaFactors& k,
                              double allowable_mpa) {
    if (!(tangential_load_n > 0.0 && module_mm > 0.0 && lewis > 0.0 && allowable_mpa > 0.0 && k.product() > 0.0)) {
        throw Error(ErrorKind::InvalidInput, "AGMA inputs must be positive");
    }
    const double b = tangential_load_n * k.product() / (allowable_mpa * module_mm * lewis);
    return std::ceil(b * 10.0 - 1e-9) / 10.0;
}

enum class GearRole { E, M1, M2, S1, S2, B };

inline const char* to_string(GearRole r) {
    switch (r) {
        case GearRole::E: return "E";
        case GearRole::M1: return "M1";
        case GearRole::M2: return "M2";
        case GearRole::S1: return "S1";
        case GearRole::S2: return "S2";
        case GearRole::B: return "B";
    }
    return "?";
}

struct GearSpec {
    GearRole role = GearRole::E;
    int teeth = 0;
    double module_mm = 0.0;
    double pitch_diameter_mm = 0.0;  // as listed for the built train
    double face_width_mm = 0.0;
    double addendum_mm = 0.0;
    double dedendum_mm = 0.0;
    double pressure_angle = deg2rad(20.0);
    bool bevel = false;

    double effective_module_mm() const { return pitch_diameter_mm / teeth; }
};

struct Mesh {
    GearRole driver;
    GearRole driven;
};

struct GearTrain {
    std::vector<GearSpec> gears;
    std::vector<Mesh> meshes;  // engine to rotor, in order; one branch shown

    const GearSpec& gear(GearRole r) const {
        for (const auto& g : gears)
            if (g.role == r) return g;
        throw Error(ErrorKind::InvalidInput, std::string("no gear ") + to_string(r));
    }

    // Product of stage ratios, formed on integer tooth counts so that a
    // nominal 4:1 train is exactly 4.
    double overall_ratio() const {
        long num = 1, den = 1;
        for (const auto& m : meshes) {
            num *= gear(m.driven).teeth;
            den *= gear(m.driver).teeth;
        }
        const long g = std::gcd(num, den);
        return double(num / g) / double(den / g);
    }
};

// Two-stage spur box E -> M1/M2 -> S1/S2, then 1:1 bevel sets to the rotors.
inline GearTrain build_gear_train() {
    const double pa = deg2rad(20.0);
    GearTrain t;
    t.gears = {
        {GearRole::E, 17, 1.2, 20.0, 36.0, 1.2, 1.44, pa, false},
        {GearRole::M1, 34, 1.2, 40.0, 36.0, 1.2, 1.44, pa, false},
        {GearRole::M2, 34, 1.2, 40.0, 36.0, 1.2, 1.44, pa, false},
        {GearRole::S1, 68, 1.2, 80.0, 36.0, 1.2, 1.44, pa, false},
        {GearRole::S2, 68, 1.2, 80.0, 36.0, 1.2, 1.44, pa, false},
        {GearRole::B, 20, 1.8, 36.0, 8.0, 1.8, 4.1, pa, true},
    };
    t.meshes = {{GearRole::E, GearRole::M1}, {GearRole::M1, GearRole::S1}, {GearRole::B, GearRole::B}};
    return t;
}

// Face width needed by the engine pinion at the hover design point.
inline double pinion_face_width_required(double shaft_power_w, double engine_rpm, const GearSpec& pinion,
                                         const AgmaFactors& k = {}, double allowable_mpa = 200.0) {
    const double torque = shaft_power_w / rpm2rads(engine_rpm);               // N m
    const double ft = 2.0 * torque / (pinion.pitch_diameter_mm * 1e-3);      // N
    return agma_face_width(ft, pinion.module_mm, lewis_y(pinion.teeth), k, allowable_mpa);
}

// ---------------------------------------------------------------------------
// Weight ledger and gross-weight loop
// ---------------------------------------------------------------------------

enum class Scaling { fixed, rotor, wing };

struct LedgerEntry {
    std::string name;
    double unit_kg = 0.0;
    int qty = 1;
    Scaling scaling = Scaling::fixed;
    double station_m = 0.0;  // longitudinal position aft of the wing leading edge

    double total_kg() const { return unit_kg * qty; }
};

struct WeightLedger {
    std::vector<LedgerEntry> entries;

    double gross() const {
        double s = 0.0;
        for (const auto& e : entries) s += e.total_kg();
        return s;
    }

    double cg() const {
        double m = 0.0, mx = 0.0;
        for (const auto& e : entries) {
            m += e.total_kg();
            mx += e.total_kg() * e.station_m;
        }
        return m > 0.0 ? mx / m : 0.0;
    }

    void validate() const {
        for (const auto& e : entries) {
            if (!(e.unit_kg >= 0.0) || e.qty < 0) {
                throw Error(ErrorKind::InvalidInput, "ledger masses must be non-negative", {{"component", e.name}});
            }
        }
    }
};

inline WeightLedger baseline_ledger() {
    return {{
        {"Wing assembly", 1.985, 2, Scaling::wing, 0.0},
        {"Rotor assembly", 0.396, 4, Scaling::rotor, 0.0},
        {"Engine assembly + Gearbox", 2.477, 1, Scaling::fixed, 0.0},
        {"Rest frame structure", 3.326, 1, Scaling::fixed, 0.0},
        {"Payload", 6.0, 1, Scaling::fixed, 0.0},
        {"Fuel", 1.15, 1, Scaling::fixed, 0.0},
    }};
}

// Sizing models calibrated at a reference gross mass. Rotors keep the
// reference disk loading, so R grows as sqrt(gross) and rotor mass with R^2.
// Wings keep the wing loading, so area and wing mass grow with gross.
struct ScalingModel {
    double reference_gross_kg = 18.5;
    double reference_radius_m = 0.38;
    double reference_wing_area_m2 = 0.754;  // one wing

    double radius(double gross) const { return reference_radius_m * std::sqrt(gross / reference_gross_kg); }
    double wing_area(double gross) const { return reference_wing_area_m2 * gross / reference_gross_kg; }
    double rotor_mass(double unit_ref, double gross) const {
        const double r = radius(gross) / reference_radius_m;
        return unit_ref * r * r;
    }
    double wing_mass(double unit_ref, double gross) const {
        return unit_ref * wing_area(gross) / reference_wing_area_m2;
    }
};

struct WeightResult {
    WeightLedger ledger;  // masses at the converged gross
    double gross_kg = 0.0;
    double cg_m = 0.0;
    int iterations = 0;  // updates applied before the residual fell below tolerance
    std::vector<double> history;  // start value followed by every iterate
};

inline WeightLedger scaled_ledger(const WeightLedger& calibration, const ScalingModel& model, double gross) {
    WeightLedger out = calibration;
    for (auto& e : out.entries) {
        if (e.scaling == Scaling::rotor) e.unit_kg = model.rotor_mass(e.unit_kg, gross);
        if (e.scaling == Scaling::wing) e.unit_kg = model.wing_mass(e.unit_kg, gross);
    }
    return out;
}

// Fixed-point iteration g <- sum of component masses sized for g. Converged
// when |f(g) - g| < tolerance.
inline WeightResult iterate_gross_weight(const WeightLedger& calibration, const ScalingModel& model,
                                         double start_kg, double tolerance_kg = 1e-6, int max_iter = 50) {
    calibration.validate();
    if (!(start_kg > 0.0) || !(tolerance_kg > 0.0)) {
        throw Error(ErrorKind::InvalidInput, "start mass and tolerance must be positive");
    }
    WeightResult r;
    double g = start_kg;
    r.history.push_back(g);
    for (int k = 0; k <= max_iter; ++k) {
        const double next = scaled_ledger(calibration, model, g).gross();
        if (!std::isfinite(next)) break;
        if (std::abs(next - g) < tolerance_kg) {
            r.iterations = k;
            r.gross_kg = g;
            r.ledger = scaled_ledger(calibration, model, g);
            r.cg_m = r.ledger.cg();
            return r;
        }
        if (k == max_iter) break;
        g = next;
        r.history.push_back(g);
    }
    throw Error(ErrorKind::Divergence, "gross-weight iteration did not converge",
                {{"history_kg", r.history}, {"max_iter", max_iter}});
}

}  // namespace designkit::powertrain
