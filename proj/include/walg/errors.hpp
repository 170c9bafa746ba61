#pragma once

#include <stdexcept>
#include <string>

namespace walg {

enum class ErrorKind {
    NotPrime,
    Inconsistent,
    NotNilpotent,
    NotGood,
    OddGradingAtP2,
    NotLagrangian,
    DegreeOverflow,
    NotInM,
    DimensionMismatch,
    SelectionFailed,
    CapTooSmall,
    EtaOutsideSlice,
    IncompatibleWeight,
    NotAModule,
    NoIntertwiner,
    Unsupported,
    ConfigError,
};

const char* error_kind_name(ErrorKind k);

class WalgError : public std::runtime_error {
public:
    WalgError(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::Inconsistent: return "Inconsistent";
    case ErrorKind::NotNilpotent: return "NotNilpotent";
    case ErrorKind::NotGood: return "NotGood";
    case ErrorKind::OddGradingAtP2: return "OddGradingAtP2";
    case ErrorKind::NotLagrangian: return "NotLagrangian";
    case ErrorKind::DegreeOverflow: return "DegreeOverflow";
    case ErrorKind::NotInM: return "NotInM";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SelectionFailed: return "SelectionFailed";
    case ErrorKind::CapTooSmall: return "CapTooSmall";
    case ErrorKind::EtaOutsideSlice: return "EtaOutsideSlice";
    case ErrorKind::IncompatibleWeight: return "IncompatibleWeight";
    case ErrorKind::NotAModule: return "NotAModule";
    case ErrorKind::NoIntertwiner: return "NoIntertwiner";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

} // namespace walg
