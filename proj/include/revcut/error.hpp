#pragma once

#include <stdexcept>
#include <string>

namespace revcut {

enum class ErrorCode {
    NotPrime,
    NotSquare,
    DimensionMismatch,
    ParseError,
    ValidationError,
    TooManyNodes,
    NotACutEdge,
    RetriesExhausted,
    TooLarge,
    NoSimultaneousMaximizer,
    MaximalityViolated,
    ZTooLarge,
    NothingToAchieve,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure surfaced by the library carries one of the codes above so
// that callers (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace revcut
