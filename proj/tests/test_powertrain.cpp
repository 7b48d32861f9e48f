#include <cmath>

#include <gtest/gtest.h>

#include "designkit/io.hpp"
#include "designkit/powertrain.hpp"

using namespace designkit;
using namespace designkit::powertrain;

namespace {

// Geometric interference check: the gear tip circle must stay inside the
// pinion's interference point on the line of action.
bool interferes(int pinion, double ratio, double phi) {
    const double m = 1.0;
    const double rp = pinion * m / 2, rg = ratio * pinion * m / 2;
    const double rbg = rg * std::cos(phi);
    const double reach = std::sqrt(rbg * rbg + std::pow((rp + rg) * std::sin(phi), 2));
    return rg + m > reach + 1e-12;
}

int brute_min_teeth(double ratio, double phi) {
    int n = 1;
    while (interferes(n, ratio, phi)) ++n;
    return n;
}

std::vector<RotorPerformance> rotors(double w_each) {
    RotorPerformance p;
    p.power = w_each;
    return std::vector<RotorPerformance>(4, p);
}

}  // namespace

TEST(Gears, MinTeethKnownValues) {
    EXPECT_EQ(min_pinion_teeth(2.0, deg2rad(20)), 15);
    EXPECT_EQ(min_pinion_teeth(1.0, deg2rad(20)), 13);
    EXPECT_LE(min_pinion_teeth(4.0, deg2rad(20)), 17);
}

TEST(Gears, MinTeethMatchesGeometry) {
    for (double ratio : {1.0, 1.5, 2.0, 3.0, 4.0, 8.0}) {
        for (double phi : {14.5, 20.0, 25.0}) {
            EXPECT_EQ(min_pinion_teeth(ratio, deg2rad(phi)), brute_min_teeth(ratio, deg2rad(phi)))
                << ratio << " " << phi;
        }
    }
}

TEST(Gears, MinTeethMonotone) {
    int prev = 1000;
    for (double phi = 14.0; phi <= 30.0; phi += 0.5) {
        const int n = min_pinion_teeth(2.0, deg2rad(phi));
        EXPECT_LE(n, prev);
        prev = n;
    }
    prev = 0;
    for (double ratio = 1.0; ratio <= 20.0; ratio += 0.25) {
        const int n = min_pinion_teeth(ratio, deg2rad(20));
        EXPECT_GE(n, prev);
        prev = n;
    }
    EXPECT_THROW(min_pinion_teeth(0.5, deg2rad(20)), Error);
}

TEST(Gears, LewisTable) {
    EXPECT_DOUBLE_EQ(lewis_y(17), 0.303);
    EXPECT_NEAR(lewis_y(23), 0.334, 1e-12);
    EXPECT_DOUBLE_EQ(lewis_y(1000), 0.480);
    EXPECT_THROW(lewis_y(11), Error);
    for (int n = 13; n < 400; ++n) EXPECT_GE(lewis_y(n), lewis_y(n - 1));
}

TEST(Gears, AgmaFaceWidth) {
    const AgmaFactors k;
    const double b = 500.0 * 1.4 * 1.25 * 1.3 * 1.1 / (200.0 * 1.2 * 0.303);
    const double got = agma_face_width(500.0, 1.2, 0.303, k, 200.0);
    EXPECT_GE(got, b);
    EXPECT_LT(got - b, 0.1 + 1e-12);
    EXPECT_THROW(agma_face_width(0.0, 1.2, 0.3, k, 200.0), Error);
}

TEST(Gears, BuiltTrain) {
    const auto t = build_gear_train();
    EXPECT_DOUBLE_EQ(t.overall_ratio(), 4.0);
    EXPECT_EQ(t.gear(GearRole::E).teeth, 17);
    EXPECT_EQ(t.gear(GearRole::S1).teeth, 68);
    EXPECT_EQ(t.gear(GearRole::B).teeth, 20);
    EXPECT_GE(t.gear(GearRole::E).teeth, min_pinion_teeth(2.0, deg2rad(20)));
    EXPECT_NEAR(t.gear(GearRole::E).effective_module_mm(), 20.0 / 17, 1e-12);
}

TEST(Gears, PinionWidthWithinBuiltFace) {
    const auto t = build_gear_train();
    const double b = pinion_face_width_required(hp2w(2.13), 12800, t.gear(GearRole::E));
    EXPECT_GT(b, 0.0);
    EXPECT_LE(b, t.gear(GearRole::E).face_width_mm);
}

TEST(Engine, PowerCurve) {
    const EngineRating e;
    EXPECT_NEAR(e.power_available_w(15000), hp2w(3.75), 1e-9);
    EXPECT_NEAR(e.power_available_w(16000), hp2w(3.75), 1e-9);
    EXPECT_NEAR(e.power_available_w(7500), hp2w(3.75) / 2, 1e-9);
    EXPECT_THROW(e.power_available_w(1000), Error);
}

TEST(Budget, MarginAndReduction) {
    const auto b = power_budget(rotors(400), rotors(100), 0.10, EngineRating{}, 12800);
    EXPECT_NEAR(b.required_installed_power, 1760.0, 1e-9);
    EXPECT_NEAR(b.reduction_fraction, 0.75, 1e-12);
}

TEST(Budget, EngineInadequate) {
    try {
        power_budget(rotors(1000), rotors(100), 0.10, EngineRating{}, 12800);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::EngineInadequate);
        EXPECT_TRUE(e.details().contains("available_hp"));
    }
}

TEST(Budget, DesignPoint) {
    const auto polar = io::resolve_polar("sc1095");
    const auto r = design_power_budget(VehicleDesign{}, polar);
    EXPECT_NEAR(r.hover_thrust_per_rotor, 18.5 * kGravity / 4, 1e-12);
    EXPECT_NEAR(r.hover_trim.perf.thrust, r.hover_thrust_per_rotor, 0.1);
    EXPECT_NEAR(r.cruise_trim.perf.thrust, r.cruise_thrust_per_rotor, 0.1);
    // momentum-theory oracle: ideal power over a plausible figure of merit
    const auto rotor = design_rotor();
    const double t = r.hover_thrust_per_rotor;
    const double ideal = 4 * t * std::sqrt(t / (2 * kRhoSeaLevel * rotor.disk_area()));
    EXPECT_GT(r.budget.hover_power, ideal / 0.85);
    EXPECT_LT(r.budget.hover_power, ideal / 0.5);
    const auto& h = r.hover_trim.perf;
    EXPECT_NEAR(h.fm, h.thrust * std::sqrt(h.thrust / (2 * kRhoSeaLevel * rotor.disk_area())) / h.power, 1e-9);
    EXPECT_NEAR(w2hp(r.budget.cruise_power), 0.55, 0.1 * 0.55);
    EXPECT_GT(r.budget.reduction_fraction, 0.6);
    EXPECT_NEAR(r.budget.required_installed_power, 1.1 * r.budget.hover_power, 1e-9);
}

TEST(Weights, BaselineLedger) {
    const auto l = baseline_ledger();
    EXPECT_NEAR(l.gross(), 18.507, 1e-9);
    EXPECT_EQ(l.entries.size(), 6u);
}

// Rotor and wing masses are both linear in gross, so f(g) = F + a g and the
// fixed point and contraction factor are known in closed form.
TEST(Weights, LinearFixedPoint) {
    const auto cal = baseline_ledger();
    const ScalingModel model;
    double fixed = 0.0, scaled = 0.0;
    for (const auto& e : cal.entries) (e.scaling == Scaling::fixed ? fixed : scaled) += e.total_kg();
    const double a = scaled / model.reference_gross_kg;
    const double star = fixed / (1 - a);

    const auto r = iterate_gross_weight(cal, model, 12.0, 1e-9);
    EXPECT_NEAR(r.gross_kg, star, 1e-8);
    for (std::size_t k = 1; k + 1 < r.history.size(); ++k) {
        const double e0 = r.history[k] - star, e1 = r.history[k + 1] - star;
        if (std::abs(e0) > 1e-6) EXPECT_NEAR(e1 / e0, a, 1e-6);
    }
    EXPECT_NEAR(r.ledger.gross(), r.gross_kg, 1e-6);
}

TEST(Weights, StartIndependentAndPayloadMonotone) {
    const ScalingModel model;
    auto cal = baseline_ledger();
    const double g1 = iterate_gross_weight(cal, model, 12.0).gross_kg;
    const double g2 = iterate_gross_weight(cal, model, 25.0).gross_kg;
    EXPECT_NEAR(g1, g2, 1e-5);
    double prev = 0.0;
    for (double payload : {0.0, 3.0, 6.0, 9.0}) {
        for (auto& e : cal.entries)
            if (e.name == "Payload") e.unit_kg = payload;
        const double g = iterate_gross_weight(cal, model, 18.0).gross_kg;
        EXPECT_GT(g, prev);
        prev = g;
    }
}

TEST(Weights, Divergence) {
    try {
        iterate_gross_weight(baseline_ledger(), ScalingModel{}, 12.0, 1e-9, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Divergence);
        EXPECT_TRUE(e.details().contains("history_kg"));
    }
}

TEST(Weights, ScaledLedgerAtReferenceIsCalibration) {
    const auto cal = baseline_ledger();
    const ScalingModel model;
    const auto s = scaled_ledger(cal, model, model.reference_gross_kg);
    for (std::size_t i = 0; i < cal.entries.size(); ++i) {
        EXPECT_NEAR(s.entries[i].unit_kg, cal.entries[i].unit_kg, 1e-12);
    }
}

TEST(Weights, RejectsNegativeMass) {
    auto cal = baseline_ledger();
    cal.entries[0].unit_kg = -1.0;
    EXPECT_THROW(iterate_gross_weight(cal, ScalingModel{}, 18.0), Error);
}
