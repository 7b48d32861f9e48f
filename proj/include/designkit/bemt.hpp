#pragma once

// Modified blade-element/momentum solver for proprotors in hover and axial
// flight. Keeps the large inflow angle, the swirl component and a tip-loss
// correction whose effect on thrust and torque depends on the inflow angle.
//
// All residual arithmetic is nondimensional: velocities are scaled by the tip
// speed, so the station radius r = y/R plays the role of the local blade speed
// and mu = V/(Omega R) that of the free stream.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "designkit/airfoil.hpp"
#include "designkit/error.hpp"
#include "designkit/units.hpp"

namespace designkit::bemt {

using airfoil::AirfoilPolar;

// Piecewise-linear table over the station fraction r, clamped at the ends.
struct RadialTable {
    std::vector<double> r;
    std::vector<double> value;

    bool empty() const noexcept { return r.empty(); }

    double operator()(double x) const {
        if (x <= r.front()) return value.front();
        if (x >= r.back()) return value.back();
        auto it = std::upper_bound(r.begin(), r.end(), x);
        const std::size_t j = std::size_t(it - r.begin());
        const double t = (x - r[j - 1]) / (r[j] - r[j - 1]);
        return value[j - 1] + t * (value[j] - value[j - 1]);
    }

    void validate(const char* what) const {
        if (r.size() != value.size() || r.size() < 2) {
            throw Error(ErrorKind::InvalidGeometry, std::string(what) + " table needs >= 2 matching entries");
        }
        for (std::size_t i = 1; i < r.size(); ++i) {
            if (!(r[i] > r[i - 1])) {
                throw Error(ErrorKind::InvalidGeometry, std::string(what) + " table stations must increase");
            }
        }
    }
};

struct BladeGeometry {
    double radius = 0.42;  // m
    int n_blades = 2;
    double root_cutout = 0.10;  // fraction of radius
    // Linear chord law from the root cutout to the tip; ignored when
    // chord_table is set.
    double root_chord = 0.042;  // m
    double tip_chord = 0.042;   // m
    double twist = 0.0;         // rad, applied as twist * r
    double preset = 0.0;        // rad
    RadialTable chord_table;    // m
    RadialTable pitch_table;    // rad, replaces preset + twist * r

    double chord(double r) const {
        if (!chord_table.empty()) return chord_table(r);
        const double t = (r - root_cutout) / (1.0 - root_cutout);
        return root_chord + (tip_chord - root_chord) * t;
    }

    // Built-in section pitch; the collective is added on top.
    double built_in_pitch(double r) const {
        if (!pitch_table.empty()) return pitch_table(r);
        return preset + twist * r;
    }

    double solidity(double r) const { return double(n_blades) * chord(r) / (kPi * radius); }

    double mean_chord() const {
        if (chord_table.empty()) return 0.5 * (root_chord + tip_chord);
        const int n = 200;
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += chord(root_cutout + (i + 0.5) * (1.0 - root_cutout) / n);
        return s / n;
    }

    double aspect_ratio() const { return radius / mean_chord(); }
    double taper_ratio() const { return root_chord / tip_chord; }
    double disk_area() const { return kPi * radius * radius; }

    void validate() const {
        if (!(radius > 0.0)) throw Error(ErrorKind::InvalidGeometry, "radius must be positive");
        if (n_blades < 2) throw Error(ErrorKind::InvalidGeometry, "need at least 2 blades");
        if (!(root_cutout > 0.0 && root_cutout < 1.0)) {
            throw Error(ErrorKind::InvalidGeometry, "root cutout must lie in (0, 1)");
        }
        if (!chord_table.empty()) chord_table.validate("chord");
        if (!pitch_table.empty()) pitch_table.validate("pitch");
        const int n = 64;
        for (int i = 0; i <= n; ++i) {
            const double r = root_cutout + (1.0 - root_cutout) * double(i) / n;
            if (!(chord(r) > 0.0)) {
                throw Error(ErrorKind::InvalidGeometry, "chord must be positive along the span",
                            {{"r", r}, {"chord_m", chord(r)}});
            }
        }
    }
};

// Rectangular or linearly tapered blade from rotor-level parameters. Aspect
// ratio is R over the mean chord; taper ratio is root chord over tip chord.
inline BladeGeometry planform(double radius, double aspect_ratio, double taper_ratio, double twist,
                              double preset, int n_blades = 2, double root_cutout = 0.10) {
    BladeGeometry g;
    g.radius = radius;
    g.n_blades = n_blades;
    g.root_cutout = root_cutout;
    const double mean = radius / aspect_ratio;
    g.tip_chord = 2.0 * mean / (taper_ratio + 1.0);
    g.root_chord = taper_ratio * g.tip_chord;
    g.twist = twist;
    g.preset = preset;
    g.validate();
    return g;
}

struct OperatingPoint {
    double omega = rpm2rads(3200.0);  // rad/s
    double v_inf = 0.0;               // m/s, axial
    double rho = kRhoSeaLevel;        // kg/m^3
    double collective = 0.0;          // rad

    void validate() const {
        if (!(omega > 0.0) || !(rho > 0.0) || !(v_inf >= 0.0) || !std::isfinite(collective)) {
            throw Error(ErrorKind::InvalidInput, "operating point violates omega>0, rho>0, v_inf>=0");
        }
    }
};

inline OperatingPoint at_rpm(double rpm, double v_inf, double collective, double rho = kRhoSeaLevel) {
    return {rpm2rads(rpm), v_inf, rho, collective};
}

struct StationSolution {
    double r = 0.0;
    double phi = 0.0;       // inflow angle, rad
    double lambda = 0.0;    // (V + w_i)/(Omega R)
    double xi = 0.0;        // (Omega y - u_i)/(Omega R)
    double lambda_i = 0.0;  // w_i/(Omega R)
    double xi_i = 0.0;      // u_i/(Omega R)
    double F = 1.0;
    double K_T = 1.0;
    double K_P = 1.0;
    double alpha = 0.0;
    double cl = 0.0;
    double cd = 0.0;
    double dCT_dr = 0.0;
    double dCP_dr = 0.0;
    double residual = 0.0;  // g(phi*) at the returned root
    double bracket_width = 0.0;
    double sigma = 0.0;
};

// Solver knobs. The scan layout mirrors the bracket search documented in the
// README; the bisection runs to floating-point resolution.
struct SolverOptions {
    int scan_slices = 200;
    double phi_margin = 1e-6;
    int max_bisections = 200;
};

inline double tip_loss(int n_blades, double r, double phi) {
    const double s = std::sin(std::abs(phi));
    if (s < 1e-300) return 1.0;
    const double f = 0.5 * double(n_blades) * (1.0 - r) / (r * s);
    return (2.0 / kPi) * std::acos(std::exp(-f));
}

// Everything the residual needs at one station, with the polar bound.
class StationProblem {
public:
    StationProblem(const BladeGeometry& geom, const OperatingPoint& op, const AirfoilPolar& polar, double r)
        : polar_(polar),
          n_blades_(geom.n_blades),
          r_(r),
          mu_(op.v_inf / (op.omega * geom.radius)),
          sigma_(geom.solidity(r)),
          pitch_(op.collective + geom.built_in_pitch(r)) {}

    double r() const noexcept { return r_; }
    double mu() const noexcept { return mu_; }
    double sigma() const noexcept { return sigma_; }
    double pitch() const noexcept { return pitch_; }

    struct Terms {
        double F, K_T, K_P, alpha, cl, cd, c_n, c_q;
    };

    Terms terms(double phi) const {
        Terms t{};
        t.F = tip_loss(n_blades_, r_, phi);
        t.K_T = 1.0 - (1.0 - t.F) * std::cos(phi);
        t.K_P = 1.0 - (1.0 - t.F) * std::sin(std::abs(phi));
        t.alpha = pitch_ - phi;
        const auto c = polar_.lookup(t.alpha);
        t.cl = c.cl;
        t.cd = c.cd;
        // Cl sec(gamma) cos(phi + gamma) and Cl sec(gamma) sin(phi + gamma),
        // expanded so that Cl = 0 needs no special case.
        t.c_n = c.cl * std::cos(phi) - c.cd * std::sin(phi);
        t.c_q = c.cl * std::sin(phi) + c.cd * std::cos(phi);
        return t;
    }

    // g(phi) = [B1 r - B2 mu] sin(phi), with
    //   B1 = sin(phi) - sigma C_n / (8 K_T sin|phi| r)
    //   B2 = cos(phi) + sigma C_q / (8 K_P sin|phi| r)
    double residual(double phi) const {
        const Terms t = terms(phi);
        return residual_from(phi, t);
    }

    double residual_from(double phi, const Terms& t) const {
        const double s = std::sin(phi);
        const double sg = double(sgn(phi));
        const double k = sigma_ / (8.0 * r_);
        const double b1s = s * s - sg * k * t.c_n / t.K_T;
        const double b2s = s * std::cos(phi) + sg * k * t.c_q / t.K_P;
        return r_ * b1s - mu_ * b2s;
    }

private:
    const AirfoilPolar& polar_;
    int n_blades_;
    double r_, mu_, sigma_, pitch_;
};

inline StationSolution finish_station(const StationProblem& p, double phi, double bracket_width) {
    const auto t = p.terms(phi);
    StationSolution s;
    s.r = p.r();
    s.phi = phi;
    s.F = t.F;
    s.K_T = t.K_T;
    s.K_P = t.K_P;
    s.alpha = t.alpha;
    s.cl = t.cl;
    s.cd = t.cd;
    s.sigma = p.sigma();
    s.bracket_width = bracket_width;
    double U = 0.0;
    if (phi == 0.0) {
        U = p.r();
        s.residual = 0.0;
    } else {
        const double sa = std::sin(std::abs(phi));
        const double k = p.sigma() / (8.0 * p.r() * sa);
        const double B1 = std::sin(phi) - k * t.c_n / t.K_T;
        const double B2 = std::cos(phi) + k * t.c_q / t.K_P;
        U = (B2 > 1e-12 || p.mu() == 0.0) ? p.r() / B2 : p.mu() / B1;
        s.residual = p.residual_from(phi, t);
    }
    s.lambda = U * std::sin(phi);
    s.xi = U * std::cos(phi);
    s.lambda_i = s.lambda - p.mu();
    s.xi_i = p.r() - s.xi;
    s.dCT_dr = 0.5 * p.sigma() * U * U * t.c_n;
    s.dCP_dr = 0.5 * p.sigma() * U * U * t.c_q * p.r();
    return s;
}

// Brackets the physical root of g by a uniform scan, then bisects.
inline StationSolution solve_station(const BladeGeometry& geom, const OperatingPoint& op,
                                     const AirfoilPolar& polar, double r,
                                     const SolverOptions& opt = {}) {
    if (!(r >= geom.root_cutout && r < 1.0)) {
        throw Error(ErrorKind::InvalidInput, "station outside [root_cutout, 1)", {{"r", r}});
    }
    const StationProblem p(geom, op, polar, r);

    // Zero-lift fixed point in hover: no inflow, no thrust.
    if (p.mu() == 0.0 && std::abs(polar.lookup(p.pitch()).cl) < 1e-12) {
        return finish_station(p, 0.0, 0.0);
    }

    const double lo_edge = opt.phi_margin;
    const double hi_edge = 0.5 * kPi - opt.phi_margin;
    const int n = opt.scan_slices;

    auto check = [](double v, double phi) {
        if (!std::isfinite(v)) {
            throw Error(ErrorKind::SolverInput, "non-finite residual", {{"phi", phi}});
        }
        return v;
    };

    auto scan = [&](double from, double to, double& a, double& b, double& ga, double& gb) {
        double x0 = from;
        double g0 = check(p.residual(x0), x0);
        for (int i = 1; i <= n; ++i) {
            const double x1 = from + (to - from) * double(i) / n;
            const double g1 = check(p.residual(x1), x1);
            if (g0 == 0.0) {
                a = b = x0;
                ga = gb = 0.0;
                return true;
            }
            if ((g0 < 0.0) != (g1 < 0.0) || g1 == 0.0) {
                a = x0;
                b = x1;
                ga = g0;
                gb = g1;
                return true;
            }
            x0 = x1;
            g0 = g1;
        }
        return false;
    };

    double a = 0, b = 0, ga = 0, gb = 0;
    if (!scan(lo_edge, hi_edge, a, b, ga, gb) && !scan(-lo_edge, -hi_edge, a, b, ga, gb)) {
        throw Error(ErrorKind::NoRoot, "no sign change of the inflow residual",
                    {{"r", r}, {"bracket_rad", {-hi_edge, hi_edge}}});
    }

    for (int it = 0; it < opt.max_bisections && ga != 0.0 && gb != 0.0; ++it) {
        const double m = 0.5 * (a + b);
        if (m == a || m == b) break;
        const double gm = check(p.residual(m), m);
        if ((gm < 0.0) == (ga < 0.0)) {
            a = m;
            ga = gm;
        } else {
            b = m;
            gb = gm;
        }
    }
    const double phi = std::abs(ga) <= std::abs(gb) ? a : b;
    return finish_station(p, phi, std::abs(b - a));
}

struct RotorPerformance {
    double CT = 0.0;
    double CP = 0.0;
    double thrust = 0.0;  // N
    double power = 0.0;   // W
    double fm = 0.0;
    double power_loading = 0.0;  // N/W
    double eta_p = 0.0;
    double mu = 0.0;
    bool fm_applicable = false;   // hover only
    bool eta_applicable = false;  // axial flight only
};

struct RotorSolution {
    RotorPerformance perf;
    std::vector<StationSolution> stations;
};

inline RotorPerformance nondim_to_performance(double CT, double CP, const BladeGeometry& geom,
                                              const OperatingPoint& op) {
    RotorPerformance p;
    const double A = geom.disk_area();
    const double vt = op.omega * geom.radius;
    p.CT = CT;
    p.CP = CP;
    p.thrust = CT * op.rho * A * vt * vt;
    p.power = CP * op.rho * A * vt * vt * vt;
    p.mu = op.v_inf / vt;
    p.power_loading = p.power != 0.0 ? p.thrust / p.power : 0.0;
    p.fm_applicable = op.v_inf == 0.0;
    p.eta_applicable = op.v_inf > 0.0;
    p.fm = (CT > 0.0 && CP > 0.0) ? std::pow(CT, 1.5) / std::sqrt(2.0) / CP : 0.0;
    p.eta_p = CP != 0.0 ? CT * p.mu / CP : 0.0;
    return p;
}

inline RotorSolution solve_rotor(const BladeGeometry& geom, const OperatingPoint& op, const AirfoilPolar& polar,
                                 int n_stations = 100, const SolverOptions& opt = {}) {
    geom.validate();
    op.validate();
    if (n_stations < 16) {
        throw Error(ErrorKind::InvalidInput, "evaluate_rotor needs at least 16 stations",
                    {{"n_stations", n_stations}});
    }
    RotorSolution out;
    out.stations.reserve(std::size_t(n_stations));
    const double dr = (1.0 - geom.root_cutout) / n_stations;
    double CT = 0.0;
    double CP = 0.0;
    for (int i = 0; i < n_stations; ++i) {
        const double r = geom.root_cutout + (i + 0.5) * dr;
        StationSolution s;
        try {
            s = solve_station(geom, op, polar, r, opt);
        } catch (const Error& e) {
            auto d = e.details();
            d["station_index"] = i;
            d["r"] = r;
            throw Error(e.kind(), std::string(e.what()) + " at station r=" + std::to_string(r), d);
        }
        CT += s.dCT_dr * dr;
        CP += s.dCP_dr * dr;
        out.stations.push_back(s);
    }
    out.perf = nondim_to_performance(CT, CP, geom, op);
    return out;
}

inline RotorPerformance evaluate_rotor(const BladeGeometry& geom, const OperatingPoint& op,
                                       const AirfoilPolar& polar, int n_stations = 100,
                                       const SolverOptions& opt = {}) {
    return solve_rotor(geom, op, polar, n_stations, opt).perf;
}

struct ThrustCurveRow {
    double collective = 0.0;  // rad
    std::optional<RotorPerformance> perf;
    std::string error;  // set when perf is empty
};

inline std::vector<ThrustCurveRow> thrust_curve(const BladeGeometry& geom, const AirfoilPolar& polar, double rpm,
                                                double v_inf, const std::vector<double>& collectives,
                                                double rho = kRhoSeaLevel, int n_stations = 100) {
    if (collectives.empty()) throw Error(ErrorKind::InvalidInput, "thrust_curve: no collective values");
    std::vector<ThrustCurveRow> rows;
    rows.reserve(collectives.size());
    for (double th : collectives) {
        ThrustCurveRow row;
        row.collective = th;
        try {
            row.perf = evaluate_rotor(geom, at_rpm(rpm, v_inf, th, rho), polar, n_stations);
        } catch (const Error& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

// Units in which polynomial blade descriptions are written: station distance
// y and chord in `length_unit_m` metres, pitch in degrees.
struct PolynomialUnits {
    double length_unit_m = 0.01;
    bool pitch_in_degrees = true;
};

inline double eval_poly(const std::vector<double>& ascending, double x) {
    double v = 0.0;
    for (auto it = ascending.rbegin(); it != ascending.rend(); ++it) v = v * x + *it;
    return v;
}

// Coefficients are in ascending order (constant term first).
inline BladeGeometry geometry_from_polynomials(double radius, const std::vector<double>& pitch_coeffs,
                                               const std::vector<double>& chord_coeffs, int n_blades = 2,
                                               double root_cutout = 0.10, PolynomialUnits units = {},
                                               int n_table = 101) {
    if (pitch_coeffs.empty() || chord_coeffs.empty()) {
        throw Error(ErrorKind::InvalidGeometry, "polynomial coefficient lists must be non-empty");
    }
    BladeGeometry g;
    g.radius = radius;
    g.n_blades = n_blades;
    g.root_cutout = root_cutout;
    for (int i = 0; i < n_table; ++i) {
        const double r = root_cutout + (1.0 - root_cutout) * double(i) / (n_table - 1);
        const double y = r * radius / units.length_unit_m;
        const double c = eval_poly(chord_coeffs, y) * units.length_unit_m;
        const double th = eval_poly(pitch_coeffs, y);
        if (!(c > 0.0)) {
            throw Error(ErrorKind::InvalidGeometry, "chord polynomial is non-positive on the span",
                        {{"r", r}, {"chord_m", c}});
        }
        g.chord_table.r.push_back(r);
        g.chord_table.value.push_back(c);
        g.pitch_table.r.push_back(r);
        g.pitch_table.value.push_back(units.pitch_in_degrees ? deg2rad(th) : th);
    }
    g.root_chord = g.chord_table.value.front();
    g.tip_chord = g.chord_table.value.back();
    g.validate();
    return g;
}

}  // namespace designkit::bemt
