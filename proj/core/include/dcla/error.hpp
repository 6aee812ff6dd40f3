#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dcla {

enum class ErrorCode {
    MissingFile,
    IoError,
    SchemaViolation,
    UnknownLabel,
    UnknownBuiltin,
    DuplicateId,
    LengthMismatch,
    EmptyInput,
    DegenerateScale,
    UnbalancedDesign,
    TooFewTargets,
    DimensionMismatch,
    MissingUtterance,
    NonFiniteValue,
    RankDeficientDesign,
    NonConvergence,
    NoScoredSessions,
    DegenerateQuantiles,
    TooFewSessions,
    UncodedUtterance,
    EmptyCluster,
    NoLabels,
    NoTextAvailable,
    IdenticalGroupMeans,
    EmptyGroup,
    InvalidConfig,
};

std::string_view error_code_name(ErrorCode code);

/// Toolkit-wide exception; carries a machine-readable code next to the message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace dcla
