#pragma once

// Variable-pitch quadrotor in hover: rigid-body dynamics, PID attitude and
// position control, thrust-coefficient allocation and waypoint missions.
//
// Frames are north-east-down. Rotors sit at body positions
//   1 (+la, +la), 2 (-la, +la), 3 (-la, -la), 4 (+la, -la)
// so roll moment is sum(-y_i T_i) and pitch moment sum(x_i T_i). Rotors 2 and
// 4 produce positive yaw reaction, 1 and 3 negative.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "designkit/bemt.hpp"
#include "designkit/error.hpp"
#include "designkit/powertrain.hpp"
#include "designkit/units.hpp"

namespace designkit::flightsim {

using Vec3 = std::array<double, 3>;
using Quad = std::array<double, 4>;

inline constexpr Quad kYawSign{-1.0, 1.0, -1.0, 1.0};
inline constexpr Quad kRotorX{1.0, -1.0, -1.0, 1.0};  // times l_a
inline constexpr Quad kRotorY{1.0, 1.0, -1.0, -1.0};  // times l_a

// How the yaw row of the mixer is linearized about hover.
//   secant:  n = K_F R sqrt(C_Th/2) sum(s_i |C_i|), the secant form
//   tangent: n = 1.5 K_F R sqrt(C_Th/2) sum(s_i |C_i|), first-order exact
enum class YawModel { secant, tangent };

struct VehicleParams {
    double mass = 18.5;              // kg
    Vec3 inertia{2.42, 1.68, 3.81};  // kg m^2, principal
    double arm = 0.5;                // m, l_a
    double k_f = 0.0;                // N, T_i = k_f C_i
    double radius = 0.38;            // m
    double ct_hover = 0.0;
    double gravity = kGravity;
    YawModel yaw_model = YawModel::secant;

    void validate() const {
        if (!(mass > 0.0) || !(inertia[0] > 0.0) || !(inertia[1] > 0.0) || !(inertia[2] > 0.0) ||
            !(radius > 0.0) || !(gravity > 0.0)) {
            throw Error(ErrorKind::InvalidInput, "vehicle parameters must be positive");
        }
        if (!(arm > 0.0) || !(k_f > 0.0) || !(ct_hover > 0.0)) {
            throw Error(ErrorKind::Configuration, "mixer is singular: arm, k_f and ct_hover must be positive",
                        {{"arm", arm}, {"k_f", k_f}, {"ct_hover", ct_hover}});
        }
    }

    double yaw_gain() const {
        const double k = k_f * radius * std::sqrt(ct_hover / 2.0);
        return yaw_model == YawModel::tangent ? 1.5 * k : k;
    }
};

struct InertiaLayout {
    double arm = 0.5;
    double wing_span = 2.29;
    double wing_gap = 1.0;
    double core_gyration_radius = 0.15;  // m, engine, frame, payload and fuel lumped
};

// Rotors as point masses at the arm tips, each wing as a slender rod along y
// offset by half the gap in x, everything else as a compact core.
inline Vec3 inertia_from_ledger(const powertrain::WeightLedger& ledger, const InertiaLayout& lay = {}) {
    Vec3 I{0.0, 0.0, 0.0};
    for (const auto& e : ledger.entries) {
        const double m = e.total_kg();
        switch (e.scaling) {
            case powertrain::Scaling::rotor: {
                const double d2 = lay.arm * lay.arm;
                I[0] += m * d2;
                I[1] += m * d2;
                I[2] += 2.0 * m * d2;
                break;
            }
            case powertrain::Scaling::wing: {
                const double rod = m * lay.wing_span * lay.wing_span / 12.0;
                const double off = m * 0.25 * lay.wing_gap * lay.wing_gap;
                I[0] += rod;
                I[1] += off;
                I[2] += rod + off;
                break;
            }
            case powertrain::Scaling::fixed: {
                const double k = m * lay.core_gyration_radius * lay.core_gyration_radius;
                I[0] += k;
                I[1] += k;
                I[2] += k;
                break;
            }
        }
    }
    return I;
}

// K_F = rho A (Omega R)^2 for the selected rotor at hover speed, C_Th at
// weight/4, inertia from the baseline ledger.
inline VehicleParams default_vehicle_params(double hover_rpm = 3200.0, double rho = kRhoSeaLevel) {
    VehicleParams p;
    const auto rotor = powertrain::design_rotor();
    const double vt = rpm2rads(hover_rpm) * rotor.radius;
    p.radius = rotor.radius;
    p.k_f = rho * rotor.disk_area() * vt * vt;
    const auto ledger = powertrain::baseline_ledger();
    p.mass = ledger.gross();
    p.inertia = inertia_from_ledger(ledger);
    p.ct_hover = p.mass * p.gravity / (4.0 * p.k_f);
    return p;
}

struct ControlCommand {
    double thrust = 0.0;  // N
    Vec3 moment{0.0, 0.0, 0.0};  // l, m, n in N m
};

// ---------------------------------------------------------------------------
// Allocation
// ---------------------------------------------------------------------------

// Linear rows: T, l, m and the linearized n.
inline ControlCommand mix_forward(const Quad& c, const VehicleParams& p) {
    ControlCommand out;
    const double kn = p.yaw_gain();
    for (int i = 0; i < 4; ++i) {
        out.thrust += p.k_f * c[i];
        out.moment[0] += -p.k_f * p.arm * kRotorY[i] * c[i];
        out.moment[1] += p.k_f * p.arm * kRotorX[i] * c[i];
        out.moment[2] += kn * kYawSign[i] * std::abs(c[i]);
    }
    return out;
}

// Yaw moment with the 3/2-power rotor torque.
inline double yaw_moment_exact(const Quad& c, const VehicleParams& p) {
    double n = 0.0;
    for (int i = 0; i < 4; ++i) n += kYawSign[i] * std::pow(std::abs(c[i]), 1.5);
    return p.k_f * p.radius / std::sqrt(2.0) * n;
}

// The four mixer rows are mutually orthogonal with squared norm 4, so the
// inverse is the scaled transpose.
inline Quad allocate(const ControlCommand& cmd, const VehicleParams& p) {
    p.validate();
    const double a = cmd.thrust / p.k_f;
    const double b = cmd.moment[0] / (p.k_f * p.arm);
    const double m = cmd.moment[1] / (p.k_f * p.arm);
    const double n = cmd.moment[2] / p.yaw_gain();
    Quad c{};
    for (int i = 0; i < 4; ++i) c[i] = 0.25 * (a - kRotorY[i] * b + kRotorX[i] * m + kYawSign[i] * n);
    return c;
}

// ---------------------------------------------------------------------------
// Thrust coefficient to collective map
// ---------------------------------------------------------------------------

struct PitchLookup {
    double collective = 0.0;  // rad
    double ct = 0.0;          // after clamping to the map range
    bool saturated = false;
};

// Fritsch-Carlson monotone cubic Hermite interpolant over increasing x.
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n) throw Error(ErrorKind::InsufficientData, "interpolant needs >= 2 matching points");
        std::vector<double> h(n - 1), d(n - 1);
        for (std::size_t k = 0; k + 1 < n; ++k) {
            h[k] = x_[k + 1] - x_[k];
            if (!(h[k] > 0.0)) throw Error(ErrorKind::InvalidInput, "interpolant abscissae must increase");
            d[k] = (y_[k + 1] - y_[k]) / h[k];
        }
        m_.assign(n, 0.0);
        m_.front() = d.front();
        m_.back() = d.back();
        for (std::size_t k = 1; k + 1 < n; ++k) {
            if (d[k - 1] * d[k] <= 0.0) continue;
            const double w1 = 2.0 * h[k] + h[k - 1];
            const double w2 = h[k] + 2.0 * h[k - 1];
            m_[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
        }
    }

    double operator()(double x) const {
        if (x <= x_.front()) return y_.front();
        if (x >= x_.back()) return y_.back();
        const std::size_t k = std::size_t(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin()) - 1;
        const double h = x_[k + 1] - x_[k];
        const double t = (x - x_[k]) / h;
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y_[k] + (t3 - 2 * t2 + t) * h * m_[k] + (-2 * t3 + 3 * t2) * y_[k + 1] +
               (t3 - t2) * h * m_[k + 1];
    }

private:
    std::vector<double> x_, y_, m_;
};

// Monotone cubic inverse of the BEMT collective -> C_T curve at a fixed
// operating point, built over the pre-stall branch. Nodes are fine enough to
// stop at the first C_T dip where inboard stations begin to stall.
class CtPitchMap {
public:
    CtPitchMap(const bemt::BladeGeometry& rotor, const airfoil::AirfoilPolar& polar, const bemt::OperatingPoint& op,
               double theta_min = deg2rad(-10.0), double theta_max = deg2rad(30.0), double step = deg2rad(0.1),
               int n_stations = 100) {
        std::vector<double> ct, th;
        const int n = int(std::lround((theta_max - theta_min) / step));
        for (int k = 0; k <= n; ++k) {
            bemt::OperatingPoint o = op;
            o.collective = theta_min + k * step;
            const double c = bemt::evaluate_rotor(rotor, o, polar, n_stations).CT;
            if (!ct.empty() && !(c > ct.back())) break;  // end of the monotone branch
            ct.push_back(c);
            th.push_back(o.collective);
        }
        if (ct.size() < 4) {
            throw Error(ErrorKind::InsufficientData, "collective map needs at least 4 monotone points",
                        {{"points", ct.size()}});
        }
        ct_min_ = ct.front();
        ct_max_ = ct.back();
        th_min_ = th.front();
        th_max_ = th.back();
        ct_nodes_ = ct;
        th_nodes_ = th;
        spline_ = MonotoneCubic(std::move(ct), std::move(th));
    }

    PitchLookup operator()(double ct) const {
        if (ct <= ct_min_) return {th_min_, ct_min_, ct < ct_min_};
        if (ct >= ct_max_) return {th_max_, ct_max_, ct > ct_max_};
        return {spline_(ct), ct, false};
    }

    double ct_min() const { return ct_min_; }
    double ct_max() const { return ct_max_; }
    const std::vector<double>& ct_nodes() const { return ct_nodes_; }
    const std::vector<double>& theta_nodes() const { return th_nodes_; }

private:
    MonotoneCubic spline_;
    std::vector<double> ct_nodes_, th_nodes_;
    double ct_min_ = 0.0, ct_max_ = 0.0, th_min_ = 0.0, th_max_ = 0.0;
};

// ---------------------------------------------------------------------------
// Rigid body
// ---------------------------------------------------------------------------

struct VehicleState {
    Vec3 position{0.0, 0.0, 0.0};  // m, NED
    Vec3 velocity{0.0, 0.0, 0.0};  // m/s, NED
    Vec3 euler{0.0, 0.0, 0.0};     // phi, theta, psi (rad), Z-Y-X
    Vec3 rates{0.0, 0.0, 0.0};     // p, q, r (rad/s), body
};

inline constexpr double kGimbalLimit = deg2rad(85.0);

// Body z axis expressed in the world frame.
inline Vec3 body_z(const Vec3& e) {
    const double cf = std::cos(e[0]), sf = std::sin(e[0]);
    const double ct = std::cos(e[1]), st = std::sin(e[1]);
    const double cp = std::cos(e[2]), sp = std::sin(e[2]);
    return {cp * st * cf + sp * sf, sp * st * cf - cp * sf, ct * cf};
}

inline Vec3 euler_rates(const Vec3& e, const Vec3& w) {
    const double cf = std::cos(e[0]), sf = std::sin(e[0]);
    const double ct = std::cos(e[1]), tt = std::tan(e[1]);
    return {w[0] + (w[1] * sf + w[2] * cf) * tt, w[1] * cf - w[2] * sf, (w[1] * sf + w[2] * cf) / ct};
}

// Total thrust and body moments from the four thrust coefficients, with the
// 3/2-power yaw torque.
inline ControlCommand rotor_loads(const Quad& c, const VehicleParams& p) {
    ControlCommand out = mix_forward(c, p);
    out.moment[2] = yaw_moment_exact(c, p);
    return out;
}

namespace detail {
struct Deriv {
    Vec3 dpos, dvel, deul, drat;
};

inline Deriv derivative(const VehicleState& s, const ControlCommand& u, const VehicleParams& p) {
    Deriv d;
    const Vec3 zb = body_z(s.euler);
    d.dpos = s.velocity;
    for (int i = 0; i < 3; ++i) d.dvel[i] = -u.thrust * zb[i] / p.mass;
    d.dvel[2] += p.gravity;
    d.deul = euler_rates(s.euler, s.rates);
    const Vec3& I = p.inertia;
    const Vec3& w = s.rates;
    d.drat = {(u.moment[0] - (I[2] - I[1]) * w[1] * w[2]) / I[0],
              (u.moment[1] - (I[0] - I[2]) * w[2] * w[0]) / I[1],
              (u.moment[2] - (I[1] - I[0]) * w[0] * w[1]) / I[2]};
    return d;
}

inline VehicleState advance(const VehicleState& s, const Deriv& d, double h) {
    VehicleState o = s;
    for (int i = 0; i < 3; ++i) {
        o.position[i] += h * d.dpos[i];
        o.velocity[i] += h * d.dvel[i];
        o.euler[i] += h * d.deul[i];
        o.rates[i] += h * d.drat[i];
    }
    return o;
}
}  // namespace detail

// One classical Runge-Kutta step with loads held over the step.
inline VehicleState step_dynamics(const VehicleState& s, const ControlCommand& loads, const VehicleParams& p,
                                  double dt) {
    if (!(dt > 0.0 && dt <= 0.01)) throw Error(ErrorKind::InvalidInput, "dt must lie in (0, 0.01] s", {{"dt", dt}});
    using detail::advance;
    using detail::derivative;
    const auto k1 = derivative(s, loads, p);
    const auto k2 = derivative(advance(s, k1, dt / 2), loads, p);
    const auto k3 = derivative(advance(s, k2, dt / 2), loads, p);
    const auto k4 = derivative(advance(s, k3, dt), loads, p);
    VehicleState o = s;
    for (int i = 0; i < 3; ++i) {
        o.position[i] += dt / 6 * (k1.dpos[i] + 2 * k2.dpos[i] + 2 * k3.dpos[i] + k4.dpos[i]);
        o.velocity[i] += dt / 6 * (k1.dvel[i] + 2 * k2.dvel[i] + 2 * k3.dvel[i] + k4.dvel[i]);
        o.euler[i] += dt / 6 * (k1.deul[i] + 2 * k2.deul[i] + 2 * k3.deul[i] + k4.deul[i]);
        o.rates[i] += dt / 6 * (k1.drat[i] + 2 * k2.drat[i] + 2 * k3.drat[i] + k4.drat[i]);
    }
    if (std::abs(o.euler[1]) > kGimbalLimit) {
        throw Error(ErrorKind::GimbalLock, "pitch attitude too close to the Euler singularity",
                    {{"theta_deg", rad2deg(o.euler[1])}});
    }
    return o;
}

// ---------------------------------------------------------------------------
// Controllers
// ---------------------------------------------------------------------------

struct PidGains {
    Vec3 kp{0.0, 0.0, 0.0};
    Vec3 ki{0.0, 0.0, 0.0};
    Vec3 kd{0.0, 0.0, 0.0};
    Vec3 integrator_limit{1.0, 1.0, 1.0};

    void validate() const {
        for (int i = 0; i < 3; ++i) {
            if (!(kp[i] >= 0.0 && ki[i] >= 0.0 && kd[i] >= 0.0) || !(integrator_limit[i] > 0.0)) {
                throw Error(ErrorKind::InvalidInput, "gains must be >= 0 and integrator limits > 0");
            }
        }
    }
};

struct GainSet {
    PidGains attitude;
    PidGains position;
    double tilt_limit = deg2rad(25.0);
};

// Attitude: natural frequency 10 rad/s and damping 0.9 on each axis inertia,
// with light integral action. Position: Kp 1.5, Kd 2.5 (about critically
// damped at 1.2 rad/s), small integral, so the outer loop stays well inside
// the attitude bandwidth.
inline GainSet default_gains(const VehicleParams& p) {
    GainSet g;
    const double wn = 10.0, zeta = 0.9;
    for (int i = 0; i < 3; ++i) {
        g.attitude.kp[i] = p.inertia[i] * wn * wn;
        g.attitude.kd[i] = 2.0 * zeta * wn * p.inertia[i];
        g.attitude.ki[i] = 0.05 * g.attitude.kp[i];
        g.attitude.integrator_limit[i] = 0.2;  // rad s
        g.position.kp[i] = 1.5;
        g.position.kd[i] = 2.5;
        g.position.ki[i] = 0.05;
        g.position.integrator_limit[i] = 0.5;  // m s
    }
    return g;
}

class AttitudePid {
public:
    explicit AttitudePid(PidGains g) : g_(g) { g_.validate(); }

    // e = E - E_d with yaw wrapped; the error rate uses the Euler rates
    // implied by the body rates (desired attitude treated as constant).
    Vec3 update(const VehicleState& s, const Vec3& desired, double dt) {
        if (!(dt > 0.0)) throw Error(ErrorKind::InvalidInput, "dt must be positive");
        Vec3 e{s.euler[0] - desired[0], s.euler[1] - desired[1], wrap_pi(s.euler[2] - desired[2])};
        const Vec3 de = euler_rates(s.euler, s.rates);
        Vec3 m{};
        for (int i = 0; i < 3; ++i) {
            integral_[i] = std::clamp(integral_[i] + e[i] * dt, -g_.integrator_limit[i], g_.integrator_limit[i]);
            m[i] = -g_.kp[i] * e[i] - g_.ki[i] * integral_[i] - g_.kd[i] * de[i];
        }
        return m;
    }

    const Vec3& integral() const { return integral_; }
    void reset() { integral_ = {0.0, 0.0, 0.0}; }

private:
    PidGains g_;
    Vec3 integral_{0.0, 0.0, 0.0};
};

struct PositionOutput {
    double thrust = 0.0;
    double phi_d = 0.0;
    double theta_d = 0.0;
    bool tilt_saturated = false;
    bool thrust_clamped = false;
};

class PositionController {
public:
    PositionController(PidGains g, double tilt_limit) : g_(g), tilt_limit_(tilt_limit) { g_.validate(); }

    // Thrust is M |r_dd_d + r_dd_fb - g| with a single mass factor; the thrust
    // direction gives the roll and pitch that realise it at heading psi_d.
    PositionOutput update(const VehicleState& s, const Vec3& r_d, double psi_d, const VehicleParams& p, double dt,
                          const Vec3& accel_ff = {0.0, 0.0, 0.0}) {
        if (!(dt > 0.0)) throw Error(ErrorKind::InvalidInput, "dt must be positive");
        Vec3 a{};
        for (int i = 0; i < 3; ++i) {
            const double e = s.position[i] - r_d[i];
            integral_[i] = std::clamp(integral_[i] + e * dt, -g_.integrator_limit[i], g_.integrator_limit[i]);
            a[i] = accel_ff[i] - g_.kp[i] * e - g_.ki[i] * integral_[i] - g_.kd[i] * s.velocity[i];
        }
        a[2] -= p.gravity;
        const double norm = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
        PositionOutput out;
        if (!(norm > 0.0)) {
            out.thrust = p.mass * p.gravity;
            out.thrust_clamped = true;
            return out;
        }
        out.thrust = p.mass * norm;
        const double ux = -a[0] / norm;
        const double uy = -a[1] / norm;
        const double sp = std::sin(psi_d), cp = std::cos(psi_d);
        auto sat_asin = [&](double v) {
            if (v > 1.0 || v < -1.0) out.tilt_saturated = true;
            return std::asin(std::clamp(v, -1.0, 1.0));
        };
        out.phi_d = sat_asin(ux * sp - uy * cp);
        out.theta_d = sat_asin((ux * cp + uy * sp) / std::cos(out.phi_d));
        auto limit = [&](double ang) {
            if (std::abs(ang) > tilt_limit_) {
                out.tilt_saturated = true;
                return std::copysign(tilt_limit_, ang);
            }
            return ang;
        };
        out.phi_d = limit(out.phi_d);
        out.theta_d = limit(out.theta_d);
        return out;
    }

    void reset() { integral_ = {0.0, 0.0, 0.0}; }

private:
    PidGains g_;
    double tilt_limit_;
    Vec3 integral_{0.0, 0.0, 0.0};
};

// ---------------------------------------------------------------------------
// Missions
// ---------------------------------------------------------------------------

struct Waypoint {
    Vec3 position{0.0, 0.0, 0.0};
    double psi = 0.0;  // rad
};

struct MissionSpec {
    std::vector<Waypoint> waypoints;
    double capture_radius = 0.1;  // m
    double dt = 0.005;            // s
    double timeout = 30.0;        // s allowed per waypoint
    double hold_time = 2.0;       // s after the last capture
    double settle_window = 1.5;   // s after each waypoint switch excluded from tracking error
    VehicleState initial;

    void validate() const {
        if (waypoints.empty()) throw Error(ErrorKind::InvalidInput, "mission needs at least one waypoint");
        if (!(capture_radius > 0.0) || !(timeout > 0.0) || !(hold_time >= 0.0) || !(settle_window >= 0.0)) {
            throw Error(ErrorKind::InvalidInput, "mission capture radius, timeout and hold time must be positive");
        }
    }
};

inline std::vector<Waypoint> mission_waypoints() {
    return {{{0, 0, -2}, 0}, {{2, 0, -2}, 0}, {{2, 0, 0}, 0}, {{2, 2, 0}, 0}, {{0, 2, 0}, 0}};
}

struct LogRow {
    double t = 0.0;
    VehicleState state;
    ControlCommand command;
    Quad ct{};
    Quad theta0{};  // rad
    Vec3 attitude_desired{};
    int waypoint = 0;
    bool saturated = false;
};

struct MissionResult {
    std::vector<LogRow> log;
    std::vector<double> capture_times;  // s, one per waypoint
    double max_tracking_error = 0.0;    // rad, roll and pitch outside the settle windows
    bool any_saturation = false;
};

inline double distance(const Vec3& a, const Vec3& b) {
    return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]));
}

// Closed loop at a single rate: position loop, attitude loop, allocation,
// per-rotor collective lookup, then one dynamics step with the realised
// coefficients.
inline MissionResult run_mission(const MissionSpec& mission, const VehicleParams& p, const GainSet& gains,
                                 const CtPitchMap& map) {
    mission.validate();
    p.validate();
    PositionController pos(gains.position, gains.tilt_limit);
    AttitudePid att(gains.attitude);
    MissionResult res;
    VehicleState s = mission.initial;
    std::size_t wp = 0;
    double t = 0.0;
    double switched_at = 0.0;
    std::optional<double> done_at;
    const double dt = mission.dt;
    const long max_steps = long(std::ceil((mission.timeout * double(mission.waypoints.size()) + mission.hold_time) / dt)) + 1;

    for (long step = 0; step <= max_steps; ++step) {
        if (!done_at && distance(s.position, mission.waypoints[wp].position) < mission.capture_radius) {
            res.capture_times.push_back(t);
            if (wp + 1 < mission.waypoints.size()) {
                ++wp;
                switched_at = t;
            } else {
                done_at = t;
            }
        }
        if (done_at && t >= *done_at + mission.hold_time - 1e-12) break;
        if (!done_at && t - switched_at > mission.timeout) {
            throw Error(ErrorKind::MissionTimeout, "waypoint not captured in time",
                        {{"waypoint", wp}, {"t_s", t},
                         {"distance_m", distance(s.position, mission.waypoints[wp].position)}});
        }
        const Waypoint& target = mission.waypoints[wp];
        const PositionOutput po = pos.update(s, target.position, target.psi, p, dt);
        const Vec3 desired{po.phi_d, po.theta_d, target.psi};
        const Vec3 moment = att.update(s, desired, dt);
        ControlCommand cmd{po.thrust, moment};
        Quad ct = allocate(cmd, p);
        LogRow row;
        row.saturated = po.tilt_saturated || po.thrust_clamped;
        for (int i = 0; i < 4; ++i) {
            const PitchLookup lk = map(ct[i]);
            row.theta0[i] = lk.collective;
            ct[i] = lk.ct;
            row.saturated = row.saturated || lk.saturated;
        }
        row.t = t;
        row.state = s;
        row.command = cmd;
        row.ct = ct;
        row.attitude_desired = desired;
        row.waypoint = int(wp);
        res.any_saturation = res.any_saturation || row.saturated;
        if (t - switched_at >= mission.settle_window) {
            res.max_tracking_error = std::max({res.max_tracking_error, std::abs(s.euler[0] - desired[0]),
                                               std::abs(s.euler[1] - desired[1])});
        }
        res.log.push_back(row);
        s = step_dynamics(s, rotor_loads(ct, p), p, dt);
        t = double(step + 1) * dt;
    }
    return res;
}

}  // namespace designkit::flightsim
