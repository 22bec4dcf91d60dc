#include "revcut/error.hpp"

namespace revcut {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NotPrime: return "NotPrime";
        case ErrorCode::NotSquare: return "NotSquare";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ValidationError: return "ValidationError";
        case ErrorCode::TooManyNodes: return "TooManyNodes";
        case ErrorCode::NotACutEdge: return "NotACutEdge";
        case ErrorCode::RetriesExhausted: return "RetriesExhausted";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::NoSimultaneousMaximizer: return "NoSimultaneousMaximizer";
        case ErrorCode::MaximalityViolated: return "MaximalityViolated";
        case ErrorCode::ZTooLarge: return "ZTooLarge";
        case ErrorCode::NothingToAchieve: return "NothingToAchieve";
    }
    return "Unknown";
}

}  // namespace revcut
