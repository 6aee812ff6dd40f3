#include "dcla/error.hpp"

namespace dcla {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::UnknownBuiltin: return "UnknownBuiltin";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::DegenerateScale: return "DegenerateScale";
    case ErrorCode::UnbalancedDesign: return "UnbalancedDesign";
    case ErrorCode::TooFewTargets: return "TooFewTargets";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::MissingUtterance: return "MissingUtterance";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::RankDeficientDesign: return "RankDeficientDesign";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::NoScoredSessions: return "NoScoredSessions";
    case ErrorCode::DegenerateQuantiles: return "DegenerateQuantiles";
    case ErrorCode::TooFewSessions: return "TooFewSessions";
    case ErrorCode::UncodedUtterance: return "UncodedUtterance";
    case ErrorCode::EmptyCluster: return "EmptyCluster";
    case ErrorCode::NoLabels: return "NoLabels";
    case ErrorCode::NoTextAvailable: return "NoTextAvailable";
    case ErrorCode::IdenticalGroupMeans: return "IdenticalGroupMeans";
    case ErrorCode::EmptyGroup: return "EmptyGroup";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    }
    return "UnknownError";
}

} // namespace dcla
