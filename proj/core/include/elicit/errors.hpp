#pragma once

#include <stdexcept>
#include <string>

namespace elicit {

/// Stable error codes shared by the library and the command line tool.
/// The code name is part of the diagnostic contract: the CLI prints
/// "ERROR <code>: <message>" and maps codes to exit statuses.
enum class ErrorCode {
    EmptyDistribution,
    MassNotNormalized,
    NonFiniteValue,
    InvalidLevel,
    InvalidWeight,
    InvalidExponent,
    InvalidParameter,
    ActionOutOfDomain,
    ShapeViolation,
    Unbracketed,
    UnknownPartition,
    LengthMismatch,
    InfiniteScore,
    DegenerateSeries,
    ParseError,
    SchemaError,
};

inline const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::EmptyDistribution: return "EmptyDistribution";
        case ErrorCode::MassNotNormalized: return "MassNotNormalized";
        case ErrorCode::NonFiniteValue: return "NonFiniteValue";
        case ErrorCode::InvalidLevel: return "InvalidLevel";
        case ErrorCode::InvalidWeight: return "InvalidWeight";
        case ErrorCode::InvalidExponent: return "InvalidExponent";
        case ErrorCode::InvalidParameter: return "InvalidParameter";
        case ErrorCode::ActionOutOfDomain: return "ActionOutOfDomain";
        case ErrorCode::ShapeViolation: return "ShapeViolation";
        case ErrorCode::Unbracketed: return "Unbracketed";
        case ErrorCode::UnknownPartition: return "UnknownPartition";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::InfiniteScore: return "InfiniteScore";
        case ErrorCode::DegenerateSeries: return "DegenerateSeries";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::SchemaError: return "SchemaError";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace elicit
