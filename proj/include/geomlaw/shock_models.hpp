#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "geomlaw/rng.hpp"
#include "geomlaw/subset_algebra.hpp"

namespace geomlaw {

/// Sparse, unvalidated parameter input keyed by mask bits.
using RawParamMap = std::map<std::uint32_t, double>;

/// Survival function n -> P(tau_1 > n_1, ..., tau_d > n_d).
using SurvivalFn = std::function<double(std::span<const Count>)>;

/// Narrow-sense (independent geometric shocks) parameters p_I, I nonempty.
class NarrowParams
{
  public:
    int dim() const { return p_.dim(); }
    /// p_I; the entry at the empty mask is 1 and never used.
    double operator[](std::uint32_t bits) const { return p_[bits]; }
    const SubsetParamMap& map() const { return p_; }

    friend NarrowParams validate_narrow(const RawParamMap& raw, int dim);

  private:
    SubsetParamMap p_;
};

/// Wide-sense (i.i.d. categorical trials) parameters p~_I over all I.
class WideParams
{
  public:
    int dim() const { return pt_.dim(); }
    double operator[](std::uint32_t bits) const { return pt_[bits]; }
    const SubsetParamMap& map() const { return pt_; }
    /// sum_{I subseteq A} p~_I, i.e. the probability that one trial leaves
    /// every component outside A untouched.
    double subset_sum(std::uint32_t a) const { return below_[a]; }

    friend WideParams validate_wide(const RawParamMap& raw, int dim);

  private:
    SubsetParamMap pt_;
    std::vector<double> below_;
};

NarrowParams validate_narrow(const RawParamMap& raw, int dim);
WideParams validate_wide(const RawParamMap& raw, int dim);

RawParamMap to_raw(const NarrowParams& params);
RawParamMap to_raw(const WideParams& params);

double survival_narrow(const NarrowParams& params, std::span<const Count> n);
double survival_wide(const WideParams& params, std::span<const Count> n);

/// Wide-sense survival evaluated with a caller-supplied tie-respecting
/// permutation (zero-based; n[perm[0]] <= n[perm[1]] <= ...).
double survival_wide_with_permutation(const WideParams& params,
                                      std::span<const Count> n,
                                      std::span<const int> perm);

SurvivalFn survival_fn(const NarrowParams& params);
SurvivalFn survival_fn(const WideParams& params);

struct PmfValue
{
    double value = 0;
    /// Rounding residue in [-1e-10, 0) was replaced by 0.
    bool clamped = false;
    /// Raw inclusion-exclusion sum below -1e-10; value keeps the raw sum.
    bool violation = false;
};

/// P(tau = n) for n_i >= 1 by inclusion-exclusion over the survival function.
PmfValue pmf(const SurvivalFn& survival, std::span<const Count> n);

struct LmWitness
{
    std::uint32_t subset = 0;
    Count elapsed = 0;
    std::vector<Count> n;
    double lhs = 0;
    double rhs = 0;
};

struct LmVerdict
{
    bool holds = true;
    double max_relative_violation = 0;
    std::optional<LmWitness> witness;
};

/// Randomized check of F(n + m 1_A) = F(m 1_A) F(n) with n supported on A.
LmVerdict check_lm_property(const SurvivalFn& survival,
                            int dim,
                            int trials,
                            Count horizon,
                            RngStream& rng,
                            double tolerance = tol::kValidation);

/// p~_I = P(tau_i > 1 for i not in I, tau_i = 1 for i in I).
WideParams wide_from_narrow(const NarrowParams& params);

/// Inverse of wide_from_narrow in dimension 2; throws NotRepresentable on
/// negative correlation or p~_empty = 0.
NarrowParams narrow_from_wide_2d(const WideParams& params);

/// Marginal law of the components in `keep`, relabelled 1..|keep| in order.
NarrowParams marginal_params(const NarrowParams& params, SubsetMask keep);
WideParams marginal_params(const WideParams& params, SubsetMask keep);

}  // namespace geomlaw
