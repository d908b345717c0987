#pragma once

#include <string>
#include <vector>

#include "geomlaw/exchangeable.hpp"
#include "geomlaw/rng.hpp"
#include "geomlaw/samplers.hpp"
#include "geomlaw/shock_models.hpp"

namespace geomlaw {

/// F(n) tabulated on {0..grid_max}^d, row-major with component 1 slowest.
struct SurvivalGrid
{
    int dim = 0;
    int grid_max = 0;
    std::vector<double> values;
    std::vector<double> error_bound;

    std::size_t cells() const { return values.size(); }
    std::vector<Count> point(std::size_t cell) const;
    std::size_t index(std::span<const Count> n) const;
};

SurvivalGrid analytic_grid(const SurvivalFn& survival, int dim, int grid_max);

/// Exhaustive sum over shock tuples with each E_I in {1..H} or the lumped
/// atom {E_I > H}. Returns the exact grid on {0..H-1}^d. d <= 3, H <= 8.
SurvivalGrid enumerate_narrow(const NarrowParams& params, int horizon);

/// Fraction of draws with tau > n; bound 3 sqrt(F(1-F)/N) + 1/N per cell.
SurvivalGrid empirical_grid(const SampleBatch& batch, int grid_max);

struct GridComparison
{
    bool pass = true;
    double max_abs_deviation = 0;
    std::vector<Count> worst_cell;
    double worst_excess = 0;
};

/// Passes iff |a - b| <= a.bound + b.bound + tolerance in every cell.
GridComparison compare_grids(const SurvivalGrid& a, const SurvivalGrid& b,
                             double tolerance = tol::kValidation);

/// Random generators used by the harnesses and tests.
NarrowParams random_narrow(int dim, RngStream& rng);
/// Rejects draws where some component is hit in the first trial almost surely.
WideParams random_wide(int dim, RngStream& rng);
/// Moments (1, E[Y], ..., E[Y^d]) of a random discrete law on [0,1) with at
/// most 5 atoms; always in M_{d+1} and Hankel-extendible.
ExchangeableSeq random_moment_beta(int dim, RngStream& rng);
/// beta from a random p~ weight vector: covers all of M_{d+1}, including
/// non-extendible members.
ExchangeableSeq random_simplex_beta(int dim, RngStream& rng);
/// Nudges one coordinate of a member of M_{d+1} until check_M fails by at
/// least `margin`, keeping entries in [0, 1] and beta_1 < 1.
ExchangeableSeq perturb_out_of_M(const ExchangeableSeq& beta, RngStream& rng,
                                 double margin = 1e-3);

/// Minimum inclusion-exclusion mass over {lo..hi}^d (no clamping).
double min_pmf_cell(const SurvivalFn& survival, int dim, Count lo, Count hi);

struct HarnessResult
{
    std::string name;
    bool pass = false;
    double metric = 0;
    double threshold = 0;
    std::string detail;
};

/// "quick" skips the Monte Carlo harnesses.
std::vector<HarnessResult> run_harnesses(const std::string& suite, std::uint64_t seed);

}  // namespace geomlaw
