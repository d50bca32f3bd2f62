#pragma once

#include <stdexcept>
#include <string>

namespace qybe {

/// Broad error categories; the CLI maps these onto exit codes.
enum class ErrorKind {
    Dimension,
    DegenerateQ,
    SingularOmega,
    Construction,
    InvalidGauge,
    InconsistentParams,
    CoshZeroCase,
    DegenerateFusion,
    InvalidParams,
    ZeroDivision,
    Branch,
    Pairing,
    NotNormalizable,
    Schema,
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::Dimension: return "DimensionError";
        case ErrorKind::DegenerateQ: return "DegenerateQ";
        case ErrorKind::SingularOmega: return "SingularOmega";
        case ErrorKind::Construction: return "ConstructionError";
        case ErrorKind::InvalidGauge: return "InvalidGauge";
        case ErrorKind::InconsistentParams: return "InconsistentParams";
        case ErrorKind::CoshZeroCase: return "CoshZeroCase";
        case ErrorKind::DegenerateFusion: return "DegenerateFusion";
        case ErrorKind::InvalidParams: return "InvalidParams";
        case ErrorKind::ZeroDivision: return "ZeroDivision";
        case ErrorKind::Branch: return "BranchError";
        case ErrorKind::Pairing: return "PairingError";
        case ErrorKind::NotNormalizable: return "NotNormalizable";
        case ErrorKind::Schema: return "SchemaError";
    }
    return "Error";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

    /// True for failures caused by a singular point of the construction
    /// (as opposed to malformed input).
    bool is_degenerate() const noexcept {
        switch (kind_) {
            case ErrorKind::DegenerateFusion:
            case ErrorKind::CoshZeroCase:
            case ErrorKind::ZeroDivision:
            case ErrorKind::Branch:
            case ErrorKind::NotNormalizable:
            case ErrorKind::DegenerateQ:
            case ErrorKind::SingularOmega:
                return true;
            default:
                return false;
        }
    }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace qybe
