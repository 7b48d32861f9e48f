#include <cmath>
#include <cstdlib>
#include <sstream>

#include <gtest/gtest.h>

#include "designkit/explorer.hpp"
#include "designkit/io.hpp"

using namespace designkit;
using namespace designkit::explorer;

namespace {

const AirfoilPolar& sc1095() {
    static const AirfoilPolar p = io::resolve_polar("sc1095");
    return p;
}
const AirfoilPolar& naca0012() {
    static const AirfoilPolar p = io::resolve_polar("naca0012");
    return p;
}

BladeGeometry baseline() { return bemt::planform(0.42, 10.0, 1.0, 0.0, 0.0); }

std::vector<double> degs(double lo, double hi, double step) {
    std::vector<double> v;
    for (double d = lo; d <= hi + 1e-9; d += step) v.push_back(deg2rad(d));
    return v;
}

// Power loading at a thrust level, linearly interpolated along one curve.
double pl_at(const std::vector<SweepRow>& rows, double value, double thrust) {
    const SweepRow* prev = nullptr;
    for (const auto& r : rows) {
        if (r.param_value != value || !r.ok) continue;
        if (prev && prev->x <= thrust && r.x >= thrust) {
            const double t = (thrust - prev->x) / (r.x - prev->x);
            return prev->y + t * (r.y - prev->y);
        }
        prev = &r;
    }
    return NAN;
}

double max_thrust(const std::vector<SweepRow>& rows, double value) {
    double m = -1e9;
    for (const auto& r : rows)
        if (r.param_value == value && r.ok) m = std::max(m, r.x);
    return m;
}

OptimizationSpec small_spec() {
    OptimizationSpec s;
    s.radius_grid = {0.34, 0.40, 0.03};
    s.twist_grid = {deg2rad(-36), deg2rad(-12), deg2rad(6)};
    s.n_stations = 40;
    return s;
}

std::string csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    io::write_sweep_csv(os, rows);
    return os.str();
}

}  // namespace

TEST(Trim, BaselineFiftyNewtons) {
    const auto r = trim_collective(baseline(), bemt::at_rpm(3200, 0, 0), naca0012(), 50.0);
    EXPECT_NEAR(rad2deg(r.collective), 8.5, 1.0);
    EXPECT_LT(std::abs(r.perf.thrust - 50.0), 0.1);
}

TEST(Trim, ZeroThrustSymmetricRotor) {
    const auto r = trim_collective(baseline(), bemt::at_rpm(3200, 0, 0), naca0012(), 0.0);
    EXPECT_NEAR(r.collective, 0.0, 1e-6);
}

TEST(Trim, UnreachableCarriesMaxThrust) {
    try {
        trim_collective(baseline(), bemt::at_rpm(3200, 0, 0), sc1095(), 1e5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::UnreachableThrust);
        EXPECT_TRUE(e.details().contains("T_max_N"));
    }
}

TEST(Trim, NegativeTargetsExtendScan) {
    const auto g = bemt::planform(0.42, 12, 5.0 / 3.0, deg2rad(-30), deg2rad(30));
    const auto op = bemt::at_rpm(2000, 20, 0);
    TrimOptions o;
    o.theta_max_deg = 40;
    const auto r = trim_collective(g, op, sc1095(), 3.0, o);
    EXPECT_LT(std::abs(r.perf.thrust - 3.0), 0.1);
}

// Higher aspect ratio: better power loading at 50 N, lower maximum thrust.
TEST(Sweep, AspectRatioTrend) {
    SweepSpec s;
    s.base_geometry = baseline();
    s.base_op = bemt::at_rpm(3200, 0, 0);
    s.parameter = Parameter::aspect_ratio;
    s.values = {8, 10, 12, 14};
    s.response = Response::pl_vs_t;
    s.collectives = degs(0, 24, 1);
    const auto rows = run_sweep(s, sc1095());
    for (std::size_t i = 1; i < s.values.size(); ++i) {
        EXPECT_GT(pl_at(rows, s.values[i], 50), pl_at(rows, s.values[i - 1], 50)) << s.values[i];
        EXPECT_LT(max_thrust(rows, s.values[i]), max_thrust(rows, s.values[i - 1])) << s.values[i];
    }
}

TEST(Sweep, RpmEfficiencyHighestAtLowSpeed) {
    SweepSpec s;
    s.base_geometry = bemt::planform(0.42, 12, 5.0 / 3.0, deg2rad(-30), deg2rad(30));
    s.base_op = bemt::at_rpm(3200, 0, deg2rad(16));
    s.parameter = Parameter::rpm;
    s.values = {2000, 2600, 3200};
    s.response = Response::eta_vs_v;
    s.speeds = {18, 20, 22};
    const auto rows = run_sweep(s, sc1095());
    auto eta = [&](double rpm) -> double {
        for (const auto& r : rows)
            if (r.param_value == rpm && r.x == 20) return r.y;
        return NAN;
    };
    EXPECT_GT(eta(2000), eta(2600));
    EXPECT_GT(eta(2600), eta(3200));
}

TEST(Sweep, SingleValueEqualsThrustCurve) {
    SweepSpec s;
    s.base_geometry = baseline();
    s.base_op = bemt::at_rpm(3200, 0, 0);
    s.parameter = Parameter::rpm;
    s.values = {3200};
    s.response = Response::thrust;
    s.collectives = degs(0, 10, 2);
    const auto rows = run_sweep(s, sc1095());
    const auto curve = bemt::thrust_curve(baseline(), sc1095(), 3200, 0, s.collectives);
    ASSERT_EQ(rows.size(), curve.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_NEAR(rows[i].x, rad2deg(curve[i].collective), 1e-12);
        EXPECT_EQ(rows[i].y, curve[i].perf->thrust);
    }
}

TEST(Sweep, TwistCouplingSetsPreset) {
    auto g = baseline();
    auto op = bemt::at_rpm(3200, 0, 0);
    apply_parameter(Parameter::twist, deg2rad(-20), true, g, op);
    EXPECT_DOUBLE_EQ(g.preset, deg2rad(20));
    apply_parameter(Parameter::taper_ratio, 2.0, false, g, op);
    EXPECT_NEAR(g.taper_ratio(), 2.0, 1e-12);
    EXPECT_NEAR(g.aspect_ratio(), 10.0, 1e-12);
}

TEST(Sweep, SerialAndParallelIdentical) {
    SweepSpec s;
    s.base_geometry = baseline();
    s.base_op = bemt::at_rpm(3200, 0, 0);
    s.parameter = Parameter::aspect_ratio;
    s.values = {8, 12};
    s.response = Response::pl_vs_t;
    s.collectives = degs(0, 20, 2);
    setenv("DESIGNKIT_THREADS", "1", 1);
    const auto serial = csv(run_sweep(s, sc1095()));
    setenv("DESIGNKIT_THREADS", "8", 1);
    const auto parallel = csv(run_sweep(s, sc1095()));
    unsetenv("DESIGNKIT_THREADS");
    EXPECT_EQ(serial, parallel);
}

TEST(Sweep, InvalidSpecs) {
    SweepSpec s;
    s.base_geometry = baseline();
    s.base_op = bemt::at_rpm(3200, 0, 0);
    EXPECT_THROW(run_sweep(s, sc1095()), Error);  // no values
    s.values = {10};
    s.response = Response::eta_vs_v;
    EXPECT_THROW(run_sweep(s, sc1095()), Error);  // no speeds
}

TEST(Grid, AxisPoints) {
    const auto p = GridAxis{0.26, 0.53, 0.01}.points();
    EXPECT_EQ(p.size(), 28u);
    EXPECT_NEAR(p.back(), 0.53, 1e-12);
    EXPECT_EQ(GridAxis(deg2rad(-45), deg2rad(-8), deg2rad(1)).points().size(), 38u);
}

TEST(Optimize, CostIsWeightedSum) {
    const auto spec = small_spec();
    const auto r = optimize(spec, sc1095());
    for (std::size_t i = 0; i < r.cost.data.size(); ++i) {
        if (r.flags[i] & kHoverTrimFailed) continue;
        EXPECT_EQ(r.cost.data[i], spec.w_fm * r.fm.data[i] + spec.w_eta * r.eta.data[i]);
    }
}

TEST(Optimize, PureHoverWeightPicksFmArgmax) {
    auto spec = small_spec();
    spec.w_fm = 1.0;
    spec.w_eta = 0.0;
    const auto r = optimize(spec, sc1095());
    const auto fm = argmax_cell(r.fm, r.twists);
    ASSERT_TRUE(fm);
    EXPECT_EQ(r.best.radius, fm->radius);
    EXPECT_EQ(r.best.twist, fm->twist);
}

TEST(Optimize, ArgmaxInvariantUnderMonotoneTransform) {
    const auto r = optimize(small_spec(), sc1095());
    auto shifted = r.cost, scaled = r.cost;
    for (auto& v : shifted.data) v += 3.0;
    for (auto& v : scaled.data) v *= 2.5;
    const auto a = argmax_cell(r.cost, r.twists), b = argmax_cell(shifted, r.twists),
               c = argmax_cell(scaled, r.twists);
    EXPECT_EQ(a->radius, b->radius);
    EXPECT_EQ(a->twist, b->twist);
    EXPECT_EQ(a->radius, c->radius);
    EXPECT_EQ(a->twist, c->twist);
}

TEST(Optimize, SingleCell) {
    auto spec = small_spec();
    spec.radius_grid = {0.38, 0.38, 0.01};
    spec.twist_grid = {deg2rad(-24), deg2rad(-24), deg2rad(1)};
    const auto r = optimize(spec, sc1095());
    EXPECT_DOUBLE_EQ(r.r_star, 0.38);
    EXPECT_NEAR(rad2deg(r.twist_star), -24.0, 1e-12);
    EXPECT_EQ(r.cost_star, r.cost(0, 0));
}

TEST(Optimize, UnreachableCellsFlagged) {
    auto spec = small_spec();
    spec.radius_grid = {0.10, 0.38, 0.28};
    const auto r = optimize(spec, sc1095());
    for (std::size_t j = 0; j < r.twists.size(); ++j) {
        EXPECT_TRUE(r.flags[j] & kHoverTrimFailed);
        EXPECT_TRUE(std::isinf(r.cost(0, j)) && r.cost(0, j) < 0);
    }
    EXPECT_DOUBLE_EQ(r.r_star, 0.38);
}

TEST(Optimize, WholeGridInfeasible) {
    auto spec = small_spec();
    spec.thrust_constraint = 1e5;
    try {
        optimize(spec, sc1095());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Infeasible);
    }
}

TEST(Optimize, WeightsMustSumToOne) {
    auto spec = small_spec();
    spec.w_fm = 0.5;
    EXPECT_THROW(spec.validate(), Error);
}
