#pragma once

#include <cmath>
#include <numbers>

namespace designkit {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kGravity = 9.80665;
inline constexpr double kWattsPerHp = 745.699872;
inline constexpr double kRhoSeaLevel = 1.225;
inline constexpr double kRhoCruise500m = 1.167;

constexpr double deg2rad(double d) { return d * kPi / 180.0; }
constexpr double rad2deg(double r) { return r * 180.0 / kPi; }
constexpr double rpm2rads(double rpm) { return rpm * 2.0 * kPi / 60.0; }
constexpr double rads2rpm(double w) { return w * 60.0 / (2.0 * kPi); }
constexpr double hp2w(double hp) { return hp * kWattsPerHp; }
constexpr double w2hp(double w) { return w / kWattsPerHp; }

inline double wrap_pi(double a) {
    a = std::remainder(a, 2.0 * kPi);
    return a;
}

template <class T>
constexpr int sgn(T v) {
    return (T(0) < v) - (v < T(0));
}

}  // namespace designkit
