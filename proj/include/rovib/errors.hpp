#pragma once

#include <stdexcept>
#include <string>

namespace rovib {

// Broad failure classes. The CLI maps these onto process exit codes.
enum class ErrorClass {
    Config,     // bad or inconsistent input
    Numerical,  // instability gate, solver or quadrature failure
    Io,
};

enum class ErrorCode {
    InvalidParams,
    InvalidArgument,
    ParseError,
    UnknownKey,
    NumericalFailure,
    UnstableSystem,
    SingularMatrix,
    FlavorMismatch,
    DegenerateDenominator,
    GridTooCoarse,
    NoResonanceInWindow,
    TargetUnreachable,
    QuadratureNotConverged,
    IoError,
};

const char* to_string(ErrorCode code) noexcept;
ErrorClass error_class(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    ErrorClass kind() const noexcept { return error_class(code_); }

private:
    ErrorCode code_;
};

}  // namespace rovib
