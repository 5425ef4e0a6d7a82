#include "semidiscrete/errors.hpp"

namespace semidiscrete {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::kTimeNotInScale: return "TimeNotInScale";
        case Errc::kHorizonBoundary: return "HorizonBoundary";
        case Errc::kRegressivityViolation: return "RegressivityViolation";
        case Errc::kQuadratureFailure: return "QuadratureFailure";
        case Errc::kCflViolation: return "CFLViolation";
        case Errc::kHorizonEmpty: return "HorizonEmpty";
        case Errc::kIndexOutOfWindow: return "IndexOutOfWindow";
        case Errc::kTimeNotOnGrid: return "TimeNotOnGrid";
        case Errc::kIndexError: return "IndexError";
        case Errc::kTooLarge: return "TooLarge";
        case Errc::kBranchUnavailable: return "BranchUnavailable";
        case Errc::kHorizonTooShort: return "HorizonTooShort";
        case Errc::kNegativeInitialData: return "NegativeInitialData";
        case Errc::kInvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace semidiscrete
