#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "designkit/airfoil.hpp"
#include "designkit/io.hpp"

using namespace designkit;
using namespace designkit::airfoil;

namespace {

AirfoilPolar three_point(StallModel m = StallModel::flat_plate_blend) {
    return AirfoilPolar("t", {{deg2rad(-10), -1.0, 0.02}, {0.0, 0.0, 0.01}, {deg2rad(10), 1.0, 0.03}}, m);
}

ErrorKind kind_of(const std::string& csv) {
    std::istringstream in(csv);
    try {
        parse_polar_csv(in, "x");
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error for:\n" << csv;
    return ErrorKind::InvalidInput;
}

}  // namespace

TEST(Polar, ReproducesNodes) {
    const auto p = three_point();
    for (const auto& s : p.samples()) {
        const auto c = p.lookup(s.alpha);
        EXPECT_DOUBLE_EQ(c.cl, s.cl);
        EXPECT_DOUBLE_EQ(c.cd, s.cd);
    }
}

TEST(Polar, LinearBetweenNodes) {
    const auto c = three_point().lookup(deg2rad(2.5));
    EXPECT_NEAR(c.cl, 0.25, 1e-12);
    EXPECT_NEAR(c.cd, 0.01 + 0.25 * 0.02, 1e-12);
    EXPECT_NEAR(c.gamma, std::atan2(c.cd, c.cl), 1e-15);
}

TEST(Polar, ClampHoldsEdgeValues) {
    const auto p = three_point(StallModel::clamp);
    EXPECT_DOUBLE_EQ(p.lookup(deg2rad(40)).cl, 1.0);
    EXPECT_DOUBLE_EQ(p.lookup(deg2rad(-40)).cd, 0.02);
}

TEST(Polar, BlendReachesFlatPlate) {
    const auto p = three_point();
    const double a = deg2rad(10) + kBlendWidth + 0.1;
    EXPECT_NEAR(p.lookup(a).cl, flat_plate_cl(a), 1e-12);
    EXPECT_NEAR(p.lookup(a).cd, flat_plate_cd(a), 1e-12);
    // continuous at the table edge
    EXPECT_NEAR(p.lookup(deg2rad(10) + 1e-9).cl, 1.0, 1e-6);
}

TEST(Polar, NonFiniteAngleIsSolverInput) {
    try {
        three_point().lookup(NAN);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SolverInput);
    }
}

TEST(Polar, ConstructorRejectsBadTables) {
    EXPECT_THROW(AirfoilPolar("a", {{0, 0, 0.01}, {0.1, 0.5, 0.01}}), Error);
    EXPECT_THROW(AirfoilPolar("a", {{0, 0, 0.01}, {0, 0.5, 0.01}, {0.2, 1, 0.01}}), Error);
    EXPECT_THROW(AirfoilPolar("a", {{0, 0, 0.01}, {0.1, 0.5, -0.01}, {0.2, 1, 0.01}}), Error);
}

TEST(PolarCsv, ParsesHeaderCommentsAndName) {
    std::istringstream in("# MYFOIL\n# notes here\nalpha_deg,cl,cd\n-5,-0.5,0.01\n0,0,0.008\n\n5,0.5,0.01\n");
    const auto p = parse_polar_csv(in, "fallback");
    EXPECT_EQ(p.name(), "MYFOIL");
    ASSERT_EQ(p.samples().size(), 3u);
    EXPECT_NEAR(p.samples()[0].alpha, deg2rad(-5), 1e-15);
}

TEST(PolarCsv, ErrorKinds) {
    EXPECT_EQ(kind_of("0,0,0.01\n1,abc,0.01\n2,0.2,0.01\n"), ErrorKind::MalformedRow);
    EXPECT_EQ(kind_of("0,0,0.01\n1,0.1\n2,0.2,0.01\n"), ErrorKind::MalformedRow);
    EXPECT_EQ(kind_of("0,0,0.01\n0,0.1,0.01\n2,0.2,0.01\n"), ErrorKind::MalformedRow);
    EXPECT_EQ(kind_of("0,0,0.01\n1,0.1,-0.01\n2,0.2,0.01\n"), ErrorKind::MalformedRow);
    EXPECT_EQ(kind_of("0,0,0.01\n1,0.1,0.01\n"), ErrorKind::InsufficientData);
    EXPECT_EQ(kind_of("0,0,0.01\n1,nan,0.01\n2,0.2,0.01\n"), ErrorKind::MalformedRow);
}

TEST(PolarCsv, MissingFileIsIo) {
    try {
        load_polar("/nonexistent/polar.csv");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Io);
    }
}

TEST(Parametric, MatchesSpec) {
    ParametricPolarSpec s;
    s.cd2 = 0.5;
    const auto p = from_parametric(s, 101);
    EXPECT_NEAR(p.lookup(deg2rad(4)).cl, 2 * kPi * deg2rad(4), 1e-3);
    EXPECT_NEAR(p.lookup(0.0).cd, s.cd0, 1e-12);
    EXPECT_THROW(from_parametric(s, 2), Error);
}

TEST(Bundled, Naca0012IsSymmetric) {
    const auto p = io::resolve_polar("naca0012");
    EXPECT_NEAR(p.lookup(0.0).cl, 0.0, 1e-12);
    for (double a : {2.0, 5.0, 9.0, 14.0}) {
        EXPECT_NEAR(p.lookup(deg2rad(a)).cl, -p.lookup(deg2rad(-a)).cl, 1e-9) << a;
        EXPECT_NEAR(p.lookup(deg2rad(a)).cd, p.lookup(deg2rad(-a)).cd, 1e-9) << a;
    }
}

TEST(Bundled, Sc1095LiftSlopeAndStall) {
    const auto p = io::resolve_polar("sc1095");
    const double slope = (p.lookup(deg2rad(4)).cl - p.lookup(deg2rad(-2)).cl) / 6.0;  // per degree
    EXPECT_NEAR(slope, 0.1, 0.015);
    double cl_max = 0.0;
    for (double a = 0; a < 25; a += 0.25) cl_max = std::max(cl_max, p.lookup(deg2rad(a)).cl);
    EXPECT_GT(cl_max, 1.2);
    EXPECT_LT(cl_max, 1.7);
}
