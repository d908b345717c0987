#pragma once

#include <optional>
#include <span>
#include <vector>

#include "geomlaw/error.hpp"

namespace geomlaw {

/// Where a membership condition failed. `offset` is the zero-based index k
/// into the checked vector, `order` the difference order j, and `value` the
/// raw violating quantity.
struct Witness
{
    int offset = 0;
    int order = 0;
    double value = 0;
};

struct Verdict
{
    bool member = true;
    std::optional<Witness> witness;
    /// Set when the leading-entry conditions (x_0 = 1, x_1 < 1, x_0 < 1)
    /// are what failed.
    bool boundary_failure = false;
};

Verdict check_M(std::span<const double> x, double tolerance = tol::kMembership);
Verdict check_LM(std::span<const double> x, double tolerance = tol::kMembership);
Verdict check_SM(std::span<const double> x, double tolerance = tol::kMembership);

struct HankelVerdict
{
    bool extendible = true;
    double min_eigenvalue_moments = 0;
    double min_eigenvalue_differences = 0;
};

/// Truncated Hausdorff moment problem: does some probability measure on
/// [0,1] have moments x_0 = 1, x_1, ..., x_m?
HankelVerdict hankel_extendible(std::span<const double> x,
                                double eigen_tolerance = tol::kPsdEigen);

struct LmExtendibleVerdict
{
    bool extendible = true;
    /// True only for length-3 input, where the battery is a characterization.
    bool exact = false;
    std::optional<double> failing_power;
};

/// Power grid {2^-6, ..., 2^6} used by lm_extendible.
std::vector<double> lm_power_grid();

/// Necessary test for complete log-monotone extendibility: every power b^r
/// on the grid must be Hankel-extendible.
LmExtendibleVerdict lm_extendible(std::span<const double> b,
                                  double eigen_tolerance = tol::kPsdEigen);

struct SequenceClassReport
{
    std::vector<double> checked;
    Verdict in_M;
    Verdict in_LM;
    Verdict in_SM;
    HankelVerdict hankel;
    std::optional<LmExtendibleVerdict> lm_ext;
};

/// Runs every membership test. LM/SM/lm-extendibility are skipped (reported
/// as non-members) when an entry is not strictly positive.
SequenceClassReport classify_sequence(std::span<const double> x,
                                      double tolerance = tol::kMembership);

}  // namespace geomlaw
