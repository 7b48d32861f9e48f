#include <array>
#include <cmath>

#include <gtest/gtest.h>

#include "designkit/bemt.hpp"
#include "designkit/io.hpp"

using namespace designkit;
using namespace designkit::bemt;

namespace {

const AirfoilPolar& sc1095() {
    static const AirfoilPolar p = io::resolve_polar("sc1095");
    return p;
}
const AirfoilPolar& naca0012() {
    static const AirfoilPolar p = io::resolve_polar("naca0012");
    return p;
}

BladeGeometry baseline() { return planform(0.42, 10.0, 1.0, 0.0, 0.0); }
BladeGeometry twisted() { return planform(0.42, 12.0, 5.0 / 3.0, deg2rad(-24), deg2rad(24)); }

// Independent station oracle: damped Newton on the induced velocities
// (lambda_i, xi_i) so that the blade-element and momentum expressions for
// dCT and dCP agree. Returns the inflow angle.
double oracle_phi(const BladeGeometry& g, const OperatingPoint& op, const AirfoilPolar& polar, double r,
                  double li0) {
    const double mu = op.v_inf / (op.omega * g.radius);
    const double sigma = g.solidity(r);
    const double pitch = op.collective + g.built_in_pitch(r);
    auto f = [&](double li, double xi_i) {
        const double lam = mu + li, xi = r - xi_i;
        const double phi = std::atan2(lam, xi);
        const double U2 = lam * lam + xi * xi;
        const double sa = std::abs(std::sin(phi));
        const double F = (2 / kPi) * std::acos(std::exp(-0.5 * g.n_blades * (1 - r) / (r * sa)));
        const double KT = 1 - (1 - F) * std::cos(phi);
        const double KP = 1 - (1 - F) * sa;
        const auto c = polar.lookup(pitch - phi);
        const double cn = c.cl * std::cos(phi) - c.cd * std::sin(phi);
        const double cq = c.cl * std::sin(phi) + c.cd * std::cos(phi);
        return std::array<double, 2>{0.5 * sigma * U2 * cn - 4 * KT * std::abs(lam) * li * r,
                                     0.5 * sigma * U2 * cq - 4 * KP * std::abs(lam) * xi_i * r};
    };
    double x0 = li0, x1 = 0.0;
    for (int it = 0; it < 200; ++it) {
        const auto y = f(x0, x1);
        const double norm = std::hypot(y[0], y[1]);
        if (norm < 1e-15) break;
        const double h = 1e-8;
        const auto a = f(x0 + h, x1), b = f(x0, x1 + h);
        const double j00 = (a[0] - y[0]) / h, j10 = (a[1] - y[1]) / h;
        const double j01 = (b[0] - y[0]) / h, j11 = (b[1] - y[1]) / h;
        const double det = j00 * j11 - j01 * j10;
        const double d0 = (y[0] * j11 - y[1] * j01) / det;
        const double d1 = (j00 * y[1] - j10 * y[0]) / det;
        double step = 1.0;
        while (step > 1e-6) {
            const auto t = f(x0 - step * d0, x1 - step * d1);
            if (std::hypot(t[0], t[1]) < norm) break;
            step *= 0.5;
        }
        x0 -= step * d0;
        x1 -= step * d1;
    }
    return std::atan2(mu + x0, r - x1);
}

}  // namespace

TEST(Station, ZeroLiftFixedPoint) {
    const auto s = solve_station(baseline(), at_rpm(3200, 0, 0), naca0012(), 0.6);
    EXPECT_DOUBLE_EQ(s.phi, 0.0);
    EXPECT_DOUBLE_EQ(s.dCT_dr, 0.0);
}

TEST(Station, AgreesWithNewtonOracle) {
    struct Case {
        BladeGeometry g;
        double rpm, v, theta_deg, li0;
    };
    const Case cases[] = {{baseline(), 3200, 0, 8.5, 0.05},
                          {twisted(), 3200, 0, 6, 0.05},
                          {twisted(), 2000, 20, 12, 0.01},
                          {twisted(), 3200, 10, 4, 0.01}};
    for (const auto& c : cases) {
        const auto op = at_rpm(c.rpm, c.v, deg2rad(c.theta_deg));
        for (double r : {0.2, 0.45, 0.7, 0.9, 0.97}) {
            const auto s = solve_station(c.g, op, sc1095(), r);
            const double phi = oracle_phi(c.g, op, sc1095(), r, c.li0);
            EXPECT_NEAR(s.phi, phi, 1e-6) << "r=" << r << " v=" << c.v;
        }
    }
}

TEST(Station, ResidualTipLossAndFactors) {
    const auto sol = solve_rotor(twisted(), at_rpm(3200, 0, deg2rad(8)), sc1095());
    for (const auto& s : sol.stations) {
        EXPECT_LT(std::abs(s.residual), 1e-10);
        EXPECT_GT(s.F, 0.0);
        EXPECT_LE(s.F, 1.0);
        EXPECT_NEAR(s.K_T, 1 - (1 - s.F) * std::cos(s.phi), 1e-15);
        EXPECT_NEAR(s.K_P, 1 - (1 - s.F) * std::sin(std::abs(s.phi)), 1e-15);
        EXPECT_NEAR(std::tan(s.phi), s.lambda / s.xi, 1e-12);
        EXPECT_LT(s.bracket_width, 1e-8);
    }
}

TEST(Station, OutsideSpanRejected) {
    EXPECT_THROW(solve_station(baseline(), at_rpm(3200, 0, 0.1), sc1095(), 0.05), Error);
    EXPECT_THROW(solve_station(baseline(), at_rpm(3200, 0, 0.1), sc1095(), 1.0), Error);
}

TEST(Rotor, DragFreePowerEqualsMomentumInducedPower) {
    airfoil::ParametricPolarSpec spec;
    spec.cd0 = 0.0;
    const auto polar = airfoil::from_parametric(spec, 201, "drag-free", airfoil::StallModel::clamp);
    for (const auto& g : {baseline(), twisted()}) {
        for (double v : {0.0, 10.0}) {
            const int n = 100;
            const auto sol = solve_rotor(g, at_rpm(3200, v, deg2rad(6)), polar, n);
            const double dr = (1 - g.root_cutout) / n;
            double cp = 0;
            for (const auto& s : sol.stations) cp += 4 * s.K_P * std::abs(s.lambda) * s.xi_i * s.r * s.r * dr;
            EXPECT_NEAR(cp / sol.perf.CP, 1.0, 1e-9) << "v=" << v;
        }
    }
}

TEST(Rotor, DimensionalIdentities) {
    const auto g = twisted();
    for (double v : {0.0, 15.0}) {
        const auto op = at_rpm(3200, v, deg2rad(8), 1.1);
        const auto p = evaluate_rotor(g, op, sc1095());
        const double A = kPi * g.radius * g.radius, vt = op.omega * g.radius;
        EXPECT_NEAR(p.thrust, p.CT * op.rho * A * vt * vt, 1e-9 * std::abs(p.thrust));
        EXPECT_NEAR(p.power, p.CP * op.rho * A * vt * vt * vt, 1e-9 * std::abs(p.power));
        EXPECT_NEAR(p.mu, v / vt, 1e-15);
        if (v == 0.0) {
            EXPECT_TRUE(p.fm_applicable);
            EXPECT_FALSE(p.eta_applicable);
            EXPECT_NEAR(p.fm, std::pow(p.CT, 1.5) / std::sqrt(2.0) / p.CP, 1e-14);
            EXPECT_NEAR(p.power_loading, p.thrust / p.power, 1e-14);
            EXPECT_EQ(p.eta_p, 0.0);
        } else {
            EXPECT_FALSE(p.fm_applicable);
            EXPECT_TRUE(p.eta_applicable);
            EXPECT_NEAR(p.eta_p, p.CT * p.mu / p.CP, 1e-14);
        }
    }
}

TEST(Rotor, FigureOfMeritBounded) {
    for (double th = 1; th <= 14; th += 1) {
        const auto p = evaluate_rotor(twisted(), at_rpm(3200, 0, deg2rad(th)), sc1095());
        if (p.thrust <= 0) continue;
        EXPECT_GT(p.fm, 0.0);
        EXPECT_LE(p.fm, 1.0);
    }
}

TEST(Rotor, GridConvergence) {
    for (const auto& g : {baseline(), twisted()}) {
        const auto op = at_rpm(3200, 0, deg2rad(8));
        const double a = evaluate_rotor(g, op, sc1095(), 128).CT;
        const double b = evaluate_rotor(g, op, sc1095(), 256).CT;
        EXPECT_LT(std::abs(a - b), 1e-3);
    }
}

TEST(Rotor, OmegaInvariance) {
    const auto g = twisted();
    const double mu = 20.0 / (rpm2rads(3200) * g.radius);
    const auto ref = evaluate_rotor(g, at_rpm(3200, 20, deg2rad(10)), sc1095());
    for (double rpm : {1500.0, 2000.0, 4000.0}) {
        const double v = mu * rpm2rads(rpm) * g.radius;
        const auto p = evaluate_rotor(g, at_rpm(rpm, v, deg2rad(10)), sc1095());
        EXPECT_NEAR(p.CT, ref.CT, 1e-12);
        EXPECT_NEAR(p.CP, ref.CP, 1e-12);
    }
}

TEST(Rotor, TooFewStations) { EXPECT_THROW(evaluate_rotor(baseline(), at_rpm(3200, 0, 0.1), sc1095(), 15), Error); }

TEST(Rotor, InvalidInputs) {
    auto g = baseline();
    g.radius = -1;
    EXPECT_THROW(evaluate_rotor(g, at_rpm(3200, 0, 0.1), sc1095()), Error);
    EXPECT_THROW(evaluate_rotor(baseline(), at_rpm(0, 0, 0.1), sc1095()), Error);
    EXPECT_THROW(evaluate_rotor(baseline(), at_rpm(3200, -1, 0.1), sc1095()), Error);
}

// Baseline rotor: 50 N at 8.5 deg with a symmetric section.
TEST(Baseline, BaselineThrust) {
    const auto p = evaluate_rotor(baseline(), at_rpm(3200, 0, deg2rad(8.5)), naca0012());
    EXPECT_NEAR(p.thrust, 50.0, 7.5);
}

TEST(Baseline, BaselineThrustMonotoneBelowStall) {
    double prev = -1;
    for (double th = 0; th <= 12; th += 1) {
        const double t = evaluate_rotor(baseline(), at_rpm(3200, 0, deg2rad(th)), naca0012()).thrust;
        EXPECT_GT(t, prev);
        prev = t;
    }
}

// Efficiency at 20 m/s is highest at the lowest rotor speed.
TEST(Baseline, EfficiencyOrderingWithRpm) {
    const auto g = planform(0.42, 12, 5.0 / 3.0, deg2rad(-30), deg2rad(30));
    double prev = 2.0;
    for (double rpm : {2000.0, 2600.0, 3200.0}) {
        const double e = evaluate_rotor(g, at_rpm(rpm, 20, deg2rad(16)), sc1095()).eta_p;
        EXPECT_LT(e, prev);
        prev = e;
    }
}

TEST(Geometry, PlanformLaws) {
    const auto g = planform(0.42, 12, 5.0 / 3.0, 0, 0);
    EXPECT_NEAR(g.aspect_ratio(), 12.0, 1e-12);
    EXPECT_NEAR(g.taper_ratio(), 5.0 / 3.0, 1e-12);
    EXPECT_NEAR(g.chord(g.root_cutout), g.root_chord, 1e-15);
    EXPECT_NEAR(g.chord(1.0), g.tip_chord, 1e-15);
}

TEST(Geometry, Polynomials) {
    EXPECT_DOUBLE_EQ(eval_poly({1, 2, 3}, 2.0), 17.0);
    // 4 cm chord, pitch 30 - 0.5 y deg with y in cm
    const auto g = geometry_from_polynomials(0.2, {30, -0.5}, {4});
    EXPECT_NEAR(g.chord(0.5), 0.04, 1e-12);
    EXPECT_NEAR(g.built_in_pitch(0.5), deg2rad(30 - 0.5 * 10), 1e-12);
    EXPECT_THROW(geometry_from_polynomials(0.2, {30}, {-1}), Error);
}

TEST(Geometry, ThrustCurveMatchesEvaluate) {
    const std::vector<double> th{deg2rad(2), deg2rad(6)};
    const auto rows = thrust_curve(baseline(), sc1095(), 3200, 0, th);
    ASSERT_EQ(rows.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
        ASSERT_TRUE(rows[i].perf);
        EXPECT_EQ(rows[i].perf->thrust, evaluate_rotor(baseline(), at_rpm(3200, 0, th[i]), sc1095()).thrust);
    }
}
