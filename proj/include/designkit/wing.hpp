#pragma once

// Biplane wing sizing: induced-power comparison against a monoplane of equal
// total area, power versus wing loading, the stall limit on wing loading, and
// per-wing planform dimensions.

#include <cmath>
#include <string>
#include <vector>

#include "designkit/error.hpp"
#include "designkit/units.hpp"

namespace designkit::wing {

struct WingDesignInputs {
    double gross_weight = 196.2;  // N
    double cruise_speed = 20.0;   // m/s
    double stall_speed = 12.0;    // m/s
    double rho = kRhoCruise500m;  // kg/m^3
    double cd0 = 0.025;
    double oswald = 0.8;
    double cl_max = 1.5;
    double aspect_ratio = 6.9;  // per wing
    double taper = 0.45;        // tip / root
    double span_ratio = 0.8;    // biplane span over monoplane span
    double rotor_station = 0.5;  // m from centerline; end of the rectangular inboard panel
    double gap = 1.0;            // m between the two wings
    std::string airfoil = "EPPLER 422";

    void validate() const {
        const bool ok = gross_weight > 0 && cruise_speed > 0 && stall_speed > 0 && rho > 0 && cd0 > 0 &&
                        oswald > 0 && cl_max > 0 && aspect_ratio > 0 && taper > 0 && taper <= 1 &&
                        span_ratio > 0 && span_ratio <= 1 && rotor_station >= 0 && gap > 0;
        if (!ok) throw Error(ErrorKind::InvalidInput, "wing inputs must be positive with taper and span ratio in (0, 1]");
    }

    double induced_factor() const { return 1.0 / (kPi * aspect_ratio * oswald); }
};

// Biplane over monoplane induced power at equal total area and equal weight,
// with the two wings treated as independent: each wing carries half the
// weight on half the area, and its aspect ratio is 2*beta^2 times the
// monoplane value.
inline double biplane_power_ratio(double beta) {
    if (!(beta > 0.0)) throw Error(ErrorKind::InvalidInput, "span ratio must be positive");
    return 1.0 / (2.0 * beta * beta);
}

struct PowerPoint {
    double wing_loading = 0.0;  // N/m^2
    double power = 0.0;         // W
};

struct PowerCurve {
    std::vector<PowerPoint> points;
    double optimum_wing_loading = 0.0;  // N/m^2
    double optimum_power = 0.0;         // W
};

inline double cruise_power(const WingDesignInputs& in, double wing_loading) {
    const double v = in.cruise_speed;
    const double w = in.gross_weight;
    return 0.5 * in.rho * v * v * v * in.cd0 * w / wing_loading +
           2.0 * in.induced_factor() * w * wing_loading / (in.rho * v);
}

inline double optimum_wing_loading(const WingDesignInputs& in) {
    const double v = in.cruise_speed;
    return 0.5 * in.rho * v * v * std::sqrt(in.cd0 / in.induced_factor());
}

inline PowerCurve power_vs_wing_loading(const WingDesignInputs& in, const std::vector<double>& grid) {
    in.validate();
    PowerCurve out;
    out.points.reserve(grid.size());
    for (double ws : grid) {
        if (!(ws > 0.0)) throw Error(ErrorKind::InvalidInput, "wing loading grid must be positive", {{"value", ws}});
        out.points.push_back({ws, cruise_power(in, ws)});
    }
    out.optimum_wing_loading = optimum_wing_loading(in);
    out.optimum_power = cruise_power(in, out.optimum_wing_loading);
    return out;
}

inline double stall_wing_loading(const WingDesignInputs& in) {
    return 0.5 * in.rho * in.stall_speed * in.stall_speed * in.cl_max;
}

struct WingPlanform {
    double area = 0.0;  // m^2, one wing
    double span = 0.0;  // m
    double root_chord = 0.0;
    double tip_chord = 0.0;
    double aspect_ratio = 0.0;
    double mean_chord = 0.0;  // area / span
    std::string airfoil;
};

struct BiplaneSizing {
    WingPlanform wing;         // each of the two identical wings
    double total_area = 0.0;   // m^2
    double wing_loading = 0.0;  // N/m^2, from weight and total area
    double monoplane_span = 0.0;
    double monoplane_aspect_ratio = 0.0;
    double gap_to_chord = 0.0;
    bool gap_ok = false;              // gap >= 1.5 root chords
    double lift_fraction = 0.9;       // informational interference derate, not used in sizing
    double stall_wing_loading = 0.0;  // N/m^2
};

inline constexpr double kMinGapToChord = 1.5;

// Each wing: a rectangular panel out to the rotor station, then a straight
// taper to the tip.
inline BiplaneSizing size_biplane(const WingDesignInputs& in, double wing_loading) {
    in.validate();
    if (!(wing_loading > 0.0)) throw Error(ErrorKind::InvalidInput, "wing loading must be positive");
    const double limit = stall_wing_loading(in);
    if (wing_loading > limit) {
        throw Error(ErrorKind::StallConstraint, "wing loading exceeds the stall limit",
                    {{"wing_loading", wing_loading}, {"stall_limit", limit}});
    }
    BiplaneSizing s;
    s.stall_wing_loading = limit;
    s.total_area = in.gross_weight / wing_loading;
    WingPlanform& w = s.wing;
    w.area = 0.5 * s.total_area;
    w.aspect_ratio = in.aspect_ratio;
    w.span = std::sqrt(in.aspect_ratio * w.area);
    w.mean_chord = w.area / w.span;
    w.airfoil = in.airfoil;
    const double half = 0.5 * w.span;
    const double inboard = std::min(in.rotor_station, half);
    w.root_chord = w.area / (2.0 * inboard + (1.0 + in.taper) * (half - inboard));
    w.tip_chord = in.taper * w.root_chord;
    s.wing_loading = in.gross_weight / (2.0 * w.area);
    s.monoplane_span = w.span / in.span_ratio;
    s.monoplane_aspect_ratio = s.monoplane_span * s.monoplane_span / s.total_area;
    s.gap_to_chord = in.gap / w.root_chord;
    s.gap_ok = s.gap_to_chord >= kMinGapToChord;
    return s;
}

}  // namespace designkit::wing
