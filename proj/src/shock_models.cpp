#include "geomlaw/shock_models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace geomlaw {
namespace {

std::string mask_name(std::uint32_t bits)
{
    std::string out = "{";
    bool first = true;
    for (int k = 0; k < 32; ++k)
    {
        if (bits & (1u << k))
        {
            if (!first)
                out += ",";
            out += std::to_string(k + 1);
            first = false;
        }
    }
    return out + "}";
}

void check_keys(const RawParamMap& raw, int dim, bool include_empty)
{
    const std::uint32_t count = 1u << dim;
    for (const auto& [bits, value] : raw)
    {
        if (bits >= count || (!include_empty && bits == 0))
        {
            throw Error(ErrorCode::RangeViolation,
                        "unexpected subset key " + std::to_string(bits)
                            + " for dimension " + std::to_string(dim));
        }
    }
    for (std::uint32_t bits = include_empty ? 0 : 1; bits < count; ++bits)
    {
        if (!raw.contains(bits))
        {
            throw Error(ErrorCode::MissingKey,
                        "missing parameter for subset " + mask_name(bits) + " (key "
                            + std::to_string(bits) + ")");
        }
    }
}

void check_unit_range(std::uint32_t bits, double value)
{
    if (!std::isfinite(value) || value < 0.0 || value > 1.0)
    {
        throw Error(ErrorCode::RangeViolation,
                    "parameter for subset " + mask_name(bits) + " is "
                        + std::to_string(value) + ", outside [0, 1]");
    }
}

/// exp(sum e_i log b_i) with 0^0 = 1.
class LogProduct
{
  public:
    void multiply(double base, Count exponent)
    {
        if (exponent == 0 || zero_)
            return;
        if (base <= 0.0)
        {
            zero_ = true;
            return;
        }
        log_sum_ += static_cast<double>(exponent) * std::log(base);
    }
    double value() const { return zero_ ? 0.0 : std::exp(log_sum_); }

  private:
    double log_sum_ = 0;
    bool zero_ = false;
};

void check_arg_dim(std::span<const Count> n, int dim)
{
    if (n.size() != static_cast<std::size_t>(dim))
    {
        throw Error(ErrorCode::DimensionMismatch,
                    "argument has " + std::to_string(n.size())
                        + " entries, expected " + std::to_string(dim));
    }
}

}  // namespace

NarrowParams validate_narrow(const RawParamMap& raw, int dim)
{
    check_dim(dim);
    check_keys(raw, dim, false);
    NarrowParams out;
    out.p_ = SubsetParamMap(dim, 1.0);
    for (const auto& [bits, value] : raw)
    {
        check_unit_range(bits, value);
        out.p_[bits] = value;
    }
    const std::uint32_t count = 1u << dim;
    for (int k = 0; k < dim; ++k)
    {
        double product = 1.0;
        for (std::uint32_t bits = 1; bits < count; ++bits)
        {
            if (bits & (1u << k))
                product *= out.p_[bits];
        }
        if (!(product < 1.0))
        {
            throw Error(ErrorCode::DegenerateComponent,
                        "component " + std::to_string(k + 1)
                            + " is never hit: product of its shock parameters is 1");
        }
    }
    return out;
}

WideParams validate_wide(const RawParamMap& raw, int dim)
{
    check_dim(dim);
    check_keys(raw, dim, true);
    WideParams out;
    out.pt_ = SubsetParamMap(dim, 0.0);
    double sum = 0;
    for (const auto& [bits, value] : raw)
    {
        check_unit_range(bits, value);
        out.pt_[bits] = value;
        sum += value;
    }
    if (std::abs(sum - 1.0) > tol::kValidation)
    {
        throw Error(ErrorCode::SumNotOne,
                    "wide-sense parameters sum to " + std::to_string(sum) + ", not 1");
    }
    const std::uint32_t count = 1u << dim;
    for (std::uint32_t bits = 0; bits < count; ++bits)
        out.pt_[bits] /= sum;

    // Zeta transform over subsets.
    out.below_.assign(out.pt_.values().begin(), out.pt_.values().end());
    for (int k = 0; k < dim; ++k)
    {
        for (std::uint32_t bits = 0; bits < count; ++bits)
        {
            if (bits & (1u << k))
                out.below_[bits] += out.below_[bits ^ (1u << k)];
        }
    }
    const std::uint32_t full = count - 1;
    for (int k = 0; k < dim; ++k)
    {
        if (!(out.below_[full & ~(1u << k)] < 1.0))
        {
            throw Error(ErrorCode::DegenerateComponent,
                        "component " + std::to_string(k + 1)
                            + " is never hit: outcomes avoiding it have probability 1");
        }
    }
    return out;
}

RawParamMap to_raw(const NarrowParams& params)
{
    RawParamMap raw;
    const std::uint32_t count = 1u << params.dim();
    for (std::uint32_t bits = 1; bits < count; ++bits)
        raw[bits] = params[bits];
    return raw;
}

RawParamMap to_raw(const WideParams& params)
{
    RawParamMap raw;
    const std::uint32_t count = 1u << params.dim();
    for (std::uint32_t bits = 0; bits < count; ++bits)
        raw[bits] = params[bits];
    return raw;
}

double survival_narrow(const NarrowParams& params, std::span<const Count> n)
{
    const int dim = params.dim();
    check_arg_dim(n, dim);
    const std::uint32_t count = 1u << dim;
    std::vector<Count> max_n(count, 0);
    LogProduct product;
    for (std::uint32_t bits = 1; bits < count; ++bits)
    {
        const int low = std::countr_zero(bits);
        max_n[bits] = std::max(max_n[bits & (bits - 1)], n[low]);
        product.multiply(params[bits], max_n[bits]);
    }
    return product.value();
}

double survival_wide_with_permutation(const WideParams& params,
                                      std::span<const Count> n,
                                      std::span<const int> perm)
{
    const int dim = params.dim();
    check_arg_dim(n, dim);
    if (perm.size() != n.size())
        throw Error(ErrorCode::DimensionMismatch, "permutation length mismatch");
    LogProduct product;
    Count previous = 0;
    std::uint32_t seen = 0;
    for (int k = 0; k < dim; ++k)
    {
        const Count current = n[perm[k]];
        if (current < previous)
            throw Error(ErrorCode::RangeViolation, "permutation does not sort the argument");
        product.multiply(params.subset_sum(seen), current - previous);
        previous = current;
        seen |= 1u << perm[k];
    }
    return product.value();
}

double survival_wide(const WideParams& params, std::span<const Count> n)
{
    const OrderStats stats = order_stats(n);
    return survival_wide_with_permutation(params, n, stats.perm);
}

SurvivalFn survival_fn(const NarrowParams& params)
{
    return [params](std::span<const Count> n) { return survival_narrow(params, n); };
}

SurvivalFn survival_fn(const WideParams& params)
{
    return [params](std::span<const Count> n) { return survival_wide(params, n); };
}

PmfValue pmf(const SurvivalFn& survival, std::span<const Count> n)
{
    const std::size_t dim = n.size();
    if (dim == 0 || dim > static_cast<std::size_t>(kMaxDim))
        throw Error(ErrorCode::DimensionTooLarge, "pmf dimension out of range");
    for (Count v : n)
    {
        if (v < 1)
            throw Error(ErrorCode::RangeViolation, "pmf arguments must be >= 1");
    }
    std::vector<Count> arg(dim);
    double sum = 0;
    const std::uint32_t count = 1u << dim;
    for (std::uint32_t s = 0; s < count; ++s)
    {
        for (std::size_t i = 0; i < dim; ++i)
            arg[i] = n[i] - 1 + ((s >> i) & 1u);
        const double value = survival(arg);
        sum += (std::popcount(s) % 2 == 0) ? value : -value;
    }
    PmfValue out;
    out.value = sum;
    if (sum < -tol::kPmfClamp)
    {
        out.violation = true;
    }
    else if (sum < 0.0)
    {
        out.value = 0.0;
        out.clamped = true;
    }
    return out;
}

LmVerdict check_lm_property(const SurvivalFn& survival,
                            int dim,
                            int trials,
                            Count horizon,
                            RngStream& rng,
                            double tolerance)
{
    check_dim(dim);
    const std::uint32_t count = 1u << dim;
    LmVerdict verdict;
    std::vector<Count> n(dim), shifted(dim), elapsed(dim);
    for (int t = 0; t < trials; ++t)
    {
        const auto subset = static_cast<std::uint32_t>(1 + rng() % (count - 1));
        const Count m = rng() % (horizon + 1);
        for (int i = 0; i < dim; ++i)
        {
            const bool in = subset & (1u << i);
            n[i] = in ? rng() % (horizon + 1) : 0;
            elapsed[i] = in ? m : 0;
            shifted[i] = n[i] + elapsed[i];
        }
        const double lhs = survival(shifted);
        const double rhs = survival(elapsed) * survival(n);
        const double scale = std::max(std::abs(lhs), std::abs(rhs));
        const double violation = scale > 0 ? std::abs(lhs - rhs) / scale : 0.0;
        if (violation > verdict.max_relative_violation)
        {
            verdict.max_relative_violation = violation;
            if (violation > tolerance)
                verdict.witness = LmWitness{subset, m, n, lhs, rhs};
        }
    }
    verdict.holds = verdict.max_relative_violation <= tolerance;
    return verdict;
}

WideParams wide_from_narrow(const NarrowParams& params)
{
    const int dim = params.dim();
    const std::uint32_t count = 1u << dim;
    const std::uint32_t full = count - 1;
    // h[S] = F(1_S) = prod over shocks touching S.
    std::vector<double> h(count, 1.0);
    std::vector<Count> arg(dim);
    for (std::uint32_t s = 0; s < count; ++s)
    {
        for (int i = 0; i < dim; ++i)
            arg[i] = (s >> i) & 1u;
        h[s] = survival_narrow(params, arg);
    }
    RawParamMap raw;
    for (std::uint32_t subset = 0; subset < count; ++subset)
    {
        const std::uint32_t outside = full & ~subset;
        double sum = 0;
        // All J subseteq subset, including J = empty.
        for (std::uint32_t j = subset;; j = (j - 1) & subset)
        {
            const double value = h[outside | j];
            sum += (std::popcount(j) % 2 == 0) ? value : -value;
            if (j == 0)
                break;
        }
        if (sum < 0.0 && sum > -tol::kValidation)
            sum = 0.0;
        raw[subset] = std::min(sum, 1.0);
    }
    return validate_wide(raw, dim);
}

NarrowParams narrow_from_wide_2d(const WideParams& params)
{
    if (params.dim() != 2)
    {
        throw Error(ErrorCode::DimensionMismatch,
                    "wide-to-narrow inversion is only available for d = 2");
    }
    const double none = params[0];
    const double only1 = params[1];
    const double only2 = params[2];
    if (!(none > 0.0))
    {
        throw Error(ErrorCode::NotRepresentable,
                    "p~_empty = 0: no narrow-sense representation");
    }
    const double margin1 = none + only2;  // P(tau_1 > 1)
    const double margin2 = none + only1;  // P(tau_2 > 1)
    const double covariance_sign = none - margin1 * margin2;
    if (covariance_sign < -tol::kValidation)
    {
        throw Error(ErrorCode::NotRepresentable,
                    "negative correlation (p~_empty - P(tau_1>1) P(tau_2>1) = "
                        + std::to_string(covariance_sign)
                        + "): narrow-sense laws are non-negatively correlated");
    }
    RawParamMap raw;
    raw[1] = std::min(1.0, none / margin2);
    raw[2] = std::min(1.0, none / margin1);
    raw[3] = std::min(1.0, margin1 * margin2 / none);
    return validate_narrow(raw, 2);
}

NarrowParams marginal_params(const NarrowParams& params, SubsetMask keep)
{
    const std::uint32_t keep_bits = keep.bits & full_mask(params.dim());
    if (keep_bits == 0)
        throw Error(ErrorCode::EmptyKeep, "marginal needs at least one component");
    const int sub_dim = std::popcount(keep_bits);
    std::vector<double> product(std::size_t{1} << sub_dim, 1.0);
    const std::uint32_t count = 1u << params.dim();
    for (std::uint32_t bits = 1; bits < count; ++bits)
    {
        const std::uint32_t inter = bits & keep_bits;
        if (inter != 0)
            product[compress_bits(inter, keep_bits)] *= params[bits];
    }
    RawParamMap raw;
    for (std::uint32_t j = 1; j < product.size(); ++j)
        raw[j] = product[j];
    return validate_narrow(raw, sub_dim);
}

WideParams marginal_params(const WideParams& params, SubsetMask keep)
{
    const std::uint32_t keep_bits = keep.bits & full_mask(params.dim());
    if (keep_bits == 0)
        throw Error(ErrorCode::EmptyKeep, "marginal needs at least one component");
    const int sub_dim = std::popcount(keep_bits);
    std::vector<double> sum(std::size_t{1} << sub_dim, 0.0);
    const std::uint32_t count = 1u << params.dim();
    for (std::uint32_t bits = 0; bits < count; ++bits)
        sum[compress_bits(bits & keep_bits, keep_bits)] += params[bits];
    RawParamMap raw;
    for (std::uint32_t j = 0; j < sum.size(); ++j)
        raw[j] = std::min(1.0, sum[j]);
    return validate_wide(raw, sub_dim);
}

}  // namespace geomlaw
