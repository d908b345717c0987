#pragma once

#include <bit>
#include <cstdint>
#include <ranges>
#include <span>
#include <vector>

#include "geomlaw/error.hpp"

namespace geomlaw {

/// Non-negative count (the n_i arguments of survival functions and the
/// sampled waiting times).
using Count = std::uint64_t;

inline constexpr int kMaxDim = 30;

/// Subset I of {1,...,d}: bit (k-1) set iff component k is in I.
struct SubsetMask
{
    std::uint32_t bits = 0;
    int dim = 0;

    /// Component index is zero-based here: contains(0) tests component 1.
    constexpr bool contains(int component) const
    {
        return (bits >> component) & 1u;
    }
    constexpr int size() const { return std::popcount(bits); }
    constexpr bool empty() const { return bits == 0; }
    constexpr std::uint32_t full() const
    {
        return dim == 32 ? ~0u : ((1u << dim) - 1u);
    }
    constexpr SubsetMask complement() const
    {
        return SubsetMask{full() & ~bits, dim};
    }

    friend constexpr bool operator==(SubsetMask, SubsetMask) = default;
};

/// Throws DimensionTooLarge if dim is outside [1, 30].
void check_dim(int dim);

inline std::uint32_t full_mask(int dim)
{
    return (1u << dim) - 1u;
}

/// Lazily enumerates all 2^dim masks in ascending bit order, keeping those
/// for which `keep` is true.
template <class Pred>
auto subsets_iter(int dim, Pred keep)
{
    check_dim(dim);
    return std::views::iota(std::uint32_t{0}, std::uint32_t{1} << dim)
           | std::views::transform(
               [dim](std::uint32_t b) { return SubsetMask{b, dim}; })
           | std::views::filter(keep);
}

inline auto subsets_iter(int dim)
{
    return subsets_iter(dim, [](SubsetMask) { return true; });
}

/// Exact binomial coefficient; n <= 62.
std::uint64_t binomial(int n, int k);

/// Forward difference of order j at offset k:
/// sum_{i=0}^{j} (-1)^i C(j, i) x_{k+i}.
double difference(std::span<const double> x, int order, int offset);

struct OrderStats
{
    std::vector<Count> sorted;
    /// Zero-based permutation: n[perm[0]] <= n[perm[1]] <= ...
    std::vector<int> perm;
};

/// Stable ascending sort with ties broken by original index.
OrderStats order_stats(std::span<const Count> n);

/// Parameters keyed by subset mask, dense over all 2^dim masks.
class SubsetParamMap
{
  public:
    SubsetParamMap() = default;
    SubsetParamMap(int dim, double fill);

    int dim() const { return dim_; }
    std::size_t size() const { return values_.size(); }

    double operator[](std::uint32_t bits) const { return values_[bits]; }
    double& operator[](std::uint32_t bits) { return values_[bits]; }
    double operator[](SubsetMask m) const { return values_[m.bits]; }

    std::span<const double> values() const { return values_; }

  private:
    int dim_ = 0;
    std::vector<double> values_;
};

/// Packs the bits of `bits` selected by `keep` into the low bits, in order
/// (component relabelling for marginals).
std::uint32_t compress_bits(std::uint32_t bits, std::uint32_t keep);

}  // namespace geomlaw
