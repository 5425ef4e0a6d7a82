#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace semidiscrete {

enum class Errc {
    kTimeNotInScale,
    kHorizonBoundary,
    kRegressivityViolation,
    kQuadratureFailure,
    kCflViolation,
    kHorizonEmpty,
    kIndexOutOfWindow,
    kTimeNotOnGrid,
    kIndexError,
    kTooLarge,
    kBranchUnavailable,
    kHorizonTooShort,
    kNegativeInitialData,
    kInvalidArgument,
};

std::string_view to_string(Errc code) noexcept;

// All library failures surface as this exception; code() identifies the
// condition, what() carries the details.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace semidiscrete
