#pragma once

// Sectional aerodynamic coefficients versus angle of attack.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "designkit/error.hpp"
#include "designkit/units.hpp"

namespace designkit::airfoil {

enum class StallModel { clamp, flat_plate_blend };

struct PolarSample {
    double alpha = 0.0;  // rad
    double cl = 0.0;
    double cd = 0.0;
};

struct Coefficients {
    double cl = 0.0;
    double cd = 0.0;
    double gamma = 0.0;  // atan2(cd, cl)
};

// Width of the transition from the last tabulated point to flat-plate values.
inline constexpr double kBlendWidth = deg2rad(10.0);

inline double flat_plate_cl(double alpha) { return 1.1 * std::sin(2.0 * alpha); }
inline double flat_plate_cd(double alpha) {
    const double s = std::sin(alpha);
    return 1.7 * s * s;
}

class AirfoilPolar {
public:
    AirfoilPolar() = default;

    AirfoilPolar(std::string name, std::vector<PolarSample> samples,
                 StallModel stall = StallModel::flat_plate_blend)
        : name_(std::move(name)), samples_(std::move(samples)), stall_(stall) {
        validate();
    }

    const std::string& name() const noexcept { return name_; }
    const std::vector<PolarSample>& samples() const noexcept { return samples_; }
    StallModel stall_model() const noexcept { return stall_; }
    double alpha_min() const { return samples_.front().alpha; }
    double alpha_max() const { return samples_.back().alpha; }

    // Total over finite alpha. Linear inside the table; outside, the stall
    // model takes over. Continuous everywhere.
    Coefficients lookup(double alpha) const {
        if (!std::isfinite(alpha)) {
            throw Error(ErrorKind::SolverInput, "polar lookup: non-finite angle of attack");
        }
        double cl = 0.0;
        double cd = 0.0;
        const PolarSample& lo = samples_.front();
        const PolarSample& hi = samples_.back();
        if (alpha <= lo.alpha) {
            outside(alpha, lo, lo.alpha - alpha, cl, cd);
        } else if (alpha >= hi.alpha) {
            outside(alpha, hi, alpha - hi.alpha, cl, cd);
        } else {
            auto it = std::upper_bound(samples_.begin(), samples_.end(), alpha,
                                       [](double a, const PolarSample& s) { return a < s.alpha; });
            const PolarSample& b = *it;
            const PolarSample& a = *(it - 1);
            const double t = (alpha - a.alpha) / (b.alpha - a.alpha);
            cl = a.cl + t * (b.cl - a.cl);
            cd = a.cd + t * (b.cd - a.cd);
        }
        return {cl, cd, std::atan2(cd, cl)};
    }

private:
    void validate() const {
        if (samples_.size() < 3) {
            throw Error(ErrorKind::InsufficientData, "polar '" + name_ + "' needs at least 3 samples",
                        {{"samples", samples_.size()}});
        }
        for (std::size_t i = 0; i < samples_.size(); ++i) {
            const auto& s = samples_[i];
            if (!std::isfinite(s.alpha) || !std::isfinite(s.cl) || !std::isfinite(s.cd)) {
                throw Error(ErrorKind::InvalidInput, "polar '" + name_ + "' has non-finite sample");
            }
            if (s.cd < 0.0) {
                throw Error(ErrorKind::InvalidInput, "polar '" + name_ + "' has negative cd",
                            {{"index", i}});
            }
            if (i > 0 && !(s.alpha > samples_[i - 1].alpha)) {
                throw Error(ErrorKind::InvalidInput,
                            "polar '" + name_ + "' alphas must be strictly increasing", {{"index", i}});
            }
        }
    }

    void outside(double alpha, const PolarSample& edge, double excess, double& cl, double& cd) const {
        if (stall_ == StallModel::clamp) {
            cl = edge.cl;
            cd = edge.cd;
            return;
        }
        const double w = std::clamp(excess / kBlendWidth, 0.0, 1.0);
        cl = (1.0 - w) * edge.cl + w * flat_plate_cl(alpha);
        cd = (1.0 - w) * edge.cd + w * flat_plate_cd(alpha);
    }

    std::string name_;
    std::vector<PolarSample> samples_;
    StallModel stall_ = StallModel::flat_plate_blend;
};

// Parametric stand-in used when no tabulated data is at hand.
struct ParametricPolarSpec {
    double cl_alpha = 2.0 * kPi;  // 1/rad
    double alpha0 = 0.0;          // rad
    double cl_max = 1.4;
    double cd0 = 0.008;
    double cd2 = 0.0;  // 1/rad^2
    double alpha_stall = deg2rad(14.0);

    void validate() const {
        if (!(cl_alpha > 0.0) || !(cd0 >= 0.0) || !(alpha_stall > 0.0) || !(cd2 >= 0.0) ||
            !(cl_max > 0.0)) {
            throw Error(ErrorKind::InvalidSpec, "parametric polar spec violates invariants");
        }
    }

    double cl(double alpha) const {
        const double d = alpha - alpha0;
        if (std::abs(d) > alpha_stall) return d > 0 ? cl_max : -cl_max;
        return std::clamp(cl_alpha * d, -cl_max, cl_max);
    }
    double cd(double alpha) const {
        const double d = alpha - alpha0;
        return cd0 + cd2 * d * d;
    }
};

// Tabulates the parametric model uniformly over [-25 deg, +25 deg] around alpha0.
inline AirfoilPolar from_parametric(const ParametricPolarSpec& spec, std::size_t n_samples,
                                    std::string name = "parametric",
                                    StallModel stall = StallModel::flat_plate_blend) {
    spec.validate();
    if (n_samples < 3) {
        throw Error(ErrorKind::InsufficientData, "from_parametric: n_samples must be >= 3",
                    {{"n_samples", n_samples}});
    }
    const double half = deg2rad(25.0);
    std::vector<PolarSample> s;
    s.reserve(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double a = spec.alpha0 - half + 2.0 * half * double(i) / double(n_samples - 1);
        s.push_back({a, spec.cl(a), spec.cd(a)});
    }
    return AirfoilPolar(std::move(name), std::move(s), stall);
}

namespace detail {
inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline bool parse_double(const std::string& tok, double& out) {
    const std::string t = trim(tok);
    if (t.empty()) return false;
    std::size_t used = 0;
    try {
        out = std::stod(t, &used);
    } catch (...) {
        return false;
    }
    return used == t.size() && std::isfinite(out);
}
}  // namespace detail

// Parses `alpha_deg,cl,cd` rows. '#' lines are comments; the first '#' line,
// when present, names the polar. A non-numeric first data row is taken as the
// header.
inline AirfoilPolar parse_polar_csv(std::istream& in, std::string name,
                                    StallModel stall = StallModel::flat_plate_blend) {
    std::vector<PolarSample> rows;
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    bool named = false;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            if (!named && rows.empty()) {
                const std::string n = detail::trim(t.substr(1));
                if (!n.empty() && n.find(' ') == std::string::npos) {
                    name = n;
                }
                named = true;
            }
            continue;
        }
        std::vector<std::string> tok;
        std::stringstream ss(t);
        std::string cell;
        while (std::getline(ss, cell, ',')) tok.push_back(cell);
        double a = 0, cl = 0, cd = 0;
        const bool ok = tok.size() == 3 && detail::parse_double(tok[0], a) &&
                        detail::parse_double(tok[1], cl) && detail::parse_double(tok[2], cd);
        if (!ok) {
            if (!header_seen && rows.empty() && detail::trim(tok.empty() ? "" : tok[0]) == "alpha_deg") {
                header_seen = true;
                continue;
            }
            throw Error(ErrorKind::MalformedRow, "polar csv: malformed row at line " + std::to_string(lineno),
                        {{"line", lineno}, {"text", t}});
        }
        if (!rows.empty() && !(deg2rad(a) > rows.back().alpha)) {
            throw Error(ErrorKind::MalformedRow,
                        "polar csv: alpha not strictly increasing at line " + std::to_string(lineno),
                        {{"line", lineno}, {"text", t}});
        }
        if (cd < 0.0) {
            throw Error(ErrorKind::MalformedRow, "polar csv: negative cd at line " + std::to_string(lineno),
                        {{"line", lineno}, {"text", t}});
        }
        rows.push_back({deg2rad(a), cl, cd});
    }
    if (rows.size() < 3) {
        throw Error(ErrorKind::InsufficientData, "polar csv: need at least 3 data rows",
                    {{"rows", rows.size()}});
    }
    return AirfoilPolar(std::move(name), std::move(rows), stall);
}

inline AirfoilPolar load_polar(const std::string& path, StallModel stall = StallModel::flat_plate_blend) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open polar file: " + path, {{"path", path}});
    std::string stem = path;
    if (auto p = stem.find_last_of("/\\"); p != std::string::npos) stem = stem.substr(p + 1);
    if (auto p = stem.find_last_of('.'); p != std::string::npos) stem = stem.substr(0, p);
    return parse_polar_csv(in, stem, stall);
}

}  // namespace designkit::airfoil
