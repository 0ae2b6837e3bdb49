#include "rovib/errors.hpp"

namespace rovib {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidParams: return "InvalidParams";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::UnknownKey: return "UnknownKey";
        case ErrorCode::NumericalFailure: return "NumericalFailure";
        case ErrorCode::UnstableSystem: return "UnstableSystem";
        case ErrorCode::SingularMatrix: return "SingularMatrix";
        case ErrorCode::FlavorMismatch: return "FlavorMismatch";
        case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
        case ErrorCode::GridTooCoarse: return "GridTooCoarse";
        case ErrorCode::NoResonanceInWindow: return "NoResonanceInWindow";
        case ErrorCode::TargetUnreachable: return "TargetUnreachable";
        case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

ErrorClass error_class(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidParams:
        case ErrorCode::InvalidArgument:
        case ErrorCode::ParseError:
        case ErrorCode::UnknownKey:
        case ErrorCode::FlavorMismatch:
        case ErrorCode::GridTooCoarse:
        case ErrorCode::NoResonanceInWindow:
            return ErrorClass::Config;
        case ErrorCode::IoError:
            return ErrorClass::Io;
        default:
            return ErrorClass::Numerical;
    }
}

}  // namespace rovib
