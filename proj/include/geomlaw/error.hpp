#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace geomlaw {

/// Stable error codes. The string form is part of the CLI's stderr contract.
enum class ErrorCode {
    IndexOutOfRange,
    DimensionTooLarge,
    DimensionMismatch,
    RangeViolation,
    DegenerateComponent,
    MissingKey,
    SumNotOne,
    NotRepresentable,
    EmptyKeep,
    InvalidSequence,
    TooShort,
    NonpositiveEntry,
    OutOfRange,
    DegenerateAtZero,
    MixingDegenerateAtOne,
    NotASurvival,
    TooLarge,
    EmptyBatch,
    ShapeMismatch,
    Parse,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error
{
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

// Central tolerance constants.
namespace tol {
inline constexpr double kValidation = 1e-12;
inline constexpr double kMembership = 1e-12;
inline constexpr double kExchangeable = 1e-12;
inline constexpr double kPsdEigen = 1e-10;
inline constexpr double kOracle = 1e-10;
inline constexpr double kPmfClamp = 1e-10;
inline constexpr double kMonteCarloSigmas = 3.0;
}  // namespace tol

}  // namespace geomlaw
