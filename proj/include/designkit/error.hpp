#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

namespace designkit {

enum class ErrorKind {
    InvalidInput,
    MalformedRow,
    InsufficientData,
    InvalidSpec,
    InvalidGeometry,
    NoRoot,
    SolverInput,
    UnreachableThrust,
    Infeasible,
    EngineInadequate,
    StallConstraint,
    Divergence,
    Configuration,
    GimbalLock,
    MissionTimeout,
    Io,
    Usage,
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::InvalidInput: return "invalid_input";
        case ErrorKind::MalformedRow: return "malformed_row";
        case ErrorKind::InsufficientData: return "insufficient_data";
        case ErrorKind::InvalidSpec: return "invalid_spec";
        case ErrorKind::InvalidGeometry: return "invalid_geometry";
        case ErrorKind::NoRoot: return "no_root";
        case ErrorKind::SolverInput: return "solver_input";
        case ErrorKind::UnreachableThrust: return "unreachable_thrust";
        case ErrorKind::Infeasible: return "infeasible";
        case ErrorKind::EngineInadequate: return "engine_inadequate";
        case ErrorKind::StallConstraint: return "stall_constraint";
        case ErrorKind::Divergence: return "divergence";
        case ErrorKind::Configuration: return "configuration";
        case ErrorKind::GimbalLock: return "gimbal_lock";
        case ErrorKind::MissionTimeout: return "mission_timeout";
        case ErrorKind::Io: return "io";
        case ErrorKind::Usage: return "usage";
    }
    return "unknown";
}

// Every module error carries a kind plus structured details, so the CLI can
// serialize it without parsing message text.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, nlohmann::json details = nlohmann::json::object())
        : std::runtime_error(what), kind_(kind), details_(std::move(details)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const nlohmann::json& details() const noexcept { return details_; }

    nlohmann::json to_json() const {
        return {{"error", to_string(kind_)}, {"message", what()}, {"details", details_}};
    }

private:
    ErrorKind kind_;
    nlohmann::json details_;
};

inline void require(bool cond, ErrorKind kind, const std::string& msg) {
    if (!cond) throw Error(kind, msg);
}

}  // namespace designkit
