#include "geomlaw/subset_algebra.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace geomlaw {

std::string_view to_string(ErrorCode code)
{
    switch (code)
    {
        case ErrorCode::IndexOutOfRange: return "index-out-of-range";
        case ErrorCode::DimensionTooLarge: return "dimension-too-large";
        case ErrorCode::DimensionMismatch: return "dimension-mismatch";
        case ErrorCode::RangeViolation: return "range-violation";
        case ErrorCode::DegenerateComponent: return "degenerate-component";
        case ErrorCode::MissingKey: return "missing-key";
        case ErrorCode::SumNotOne: return "sum-not-one";
        case ErrorCode::NotRepresentable: return "not-representable";
        case ErrorCode::EmptyKeep: return "empty-keep";
        case ErrorCode::InvalidSequence: return "invalid-sequence";
        case ErrorCode::TooShort: return "too-short";
        case ErrorCode::NonpositiveEntry: return "nonpositive-entry";
        case ErrorCode::OutOfRange: return "out-of-range";
        case ErrorCode::DegenerateAtZero: return "degenerate-at-zero";
        case ErrorCode::MixingDegenerateAtOne: return "mixing-degenerate-at-one";
        case ErrorCode::NotASurvival: return "not-a-survival";
        case ErrorCode::TooLarge: return "too-large";
        case ErrorCode::EmptyBatch: return "empty-batch";
        case ErrorCode::ShapeMismatch: return "shape-mismatch";
        case ErrorCode::Parse: return "parse-error";
    }
    return "unknown";
}

void check_dim(int dim)
{
    if (dim < 1 || dim > kMaxDim)
    {
        throw Error(ErrorCode::DimensionTooLarge,
                    "dimension " + std::to_string(dim) + " outside [1, 30]");
    }
}

std::uint64_t binomial(int n, int k)
{
    if (k < 0 || k > n)
        return 0;
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (int i = 1; i <= k; ++i)
    {
        // Exact: result * (n - k + i) is divisible by i at every step.
        result = result / static_cast<std::uint64_t>(i)
                     * static_cast<std::uint64_t>(n - k + i)
                 + result % static_cast<std::uint64_t>(i)
                       * static_cast<std::uint64_t>(n - k + i)
                       / static_cast<std::uint64_t>(i);
    }
    return result;
}

double difference(std::span<const double> x, int order, int offset)
{
    if (order < 0 || offset < 0
        || static_cast<std::size_t>(offset + order) >= x.size())
    {
        throw Error(ErrorCode::IndexOutOfRange,
                    "difference of order " + std::to_string(order) + " at offset "
                        + std::to_string(offset) + " needs more than "
                        + std::to_string(x.size()) + " entries");
    }
    double sum = 0;
    for (int i = 0; i <= order; ++i)
    {
        const double term = static_cast<double>(binomial(order, i)) * x[offset + i];
        sum += (i % 2 == 0) ? term : -term;
    }
    return sum;
}

OrderStats order_stats(std::span<const Count> n)
{
    OrderStats out;
    out.perm.resize(n.size());
    std::iota(out.perm.begin(), out.perm.end(), 0);
    std::stable_sort(out.perm.begin(), out.perm.end(),
                     [&](int a, int b) { return n[a] < n[b]; });
    out.sorted.reserve(n.size());
    for (int i : out.perm)
        out.sorted.push_back(n[i]);
    return out;
}

SubsetParamMap::SubsetParamMap(int dim, double fill) : dim_(dim)
{
    check_dim(dim);
    values_.assign(std::size_t{1} << dim, fill);
}

std::uint32_t compress_bits(std::uint32_t bits, std::uint32_t keep)
{
    std::uint32_t out = 0;
    int pos = 0;
    for (int k = 0; k < 32; ++k)
    {
        if (keep & (1u << k))
        {
            if (bits & (1u << k))
                out |= 1u << pos;
            ++pos;
        }
    }
    return out;
}

}  // namespace geomlaw
