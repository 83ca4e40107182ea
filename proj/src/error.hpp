#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sscqp {

enum class ErrorCode {
    InvalidArgument,
    SingularMatrix,
    NotPositiveDefinite,
    NoConvergence,
    ParseError,
    InvalidProblem,
    DimensionTooLarge,
    GenerationFailed,
    PreconditionViolated,
    InternalConsistency,
    Io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Malformed problem file. `line()` is 1-based; 0 when the error is not tied to a line.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace sscqp
