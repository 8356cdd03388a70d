#ifndef JBD_ERROR_HPP
#define JBD_ERROR_HPP

#include <stdexcept>
#include <string>

namespace jbd {

enum class ErrorCode {
    InvalidInput,
    DegenerateStart,
    LuckyBreakdown,
    InnerSolverStalled,
    NotRegular,
    DenseCapExceeded,
    DiagnosticsUnavailable,
    NumericalInconsistency,
    ParseError,
    Unsupported,
    IoError,
    NoConvergence,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Thrown by the Matrix Market reader; carries the 1-based offending line.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace jbd

#endif
