#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace geomlaw::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kVerificationFailed = 1;
inline constexpr int kUsage = 2;
inline constexpr int kValidation = 3;

/// Runs `geomlaw <args...>`; machine-readable output goes to `out`,
/// structured JSON errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace geomlaw::cli
