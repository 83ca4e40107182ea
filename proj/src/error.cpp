#include "error.hpp"

namespace sscqp {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::SingularMatrix: return "SingularMatrix";
        case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::InvalidProblem: return "InvalidProblem";
        case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
        case ErrorCode::GenerationFailed: return "GenerationFailed";
        case ErrorCode::PreconditionViolated: return "PreconditionViolated";
        case ErrorCode::InternalConsistency: return "InternalConsistency";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace sscqp
