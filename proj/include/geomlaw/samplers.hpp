#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "geomlaw/extendibility.hpp"
#include "geomlaw/rng.hpp"
#include "geomlaw/shock_models.hpp"

namespace geomlaw {

struct Provenance
{
    std::string model;
    std::string algorithm{RngStream::algorithm};
    std::uint64_t params_digest = 0;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

/// n_samples draws of an N^d-valued vector, row-major.
struct SampleBatch
{
    int dim = 0;
    std::size_t n_samples = 0;
    std::vector<Count> data;
    Provenance provenance;

    std::span<const Count> row(std::size_t i) const
    {
        return {data.data() + i * static_cast<std::size_t>(dim),
                static_cast<std::size_t>(dim)};
    }
};

/// Seed and number of substreams. Draws are split into `workers` contiguous
/// chunks, chunk w using RngStream::substream(seed, w).
struct SamplingPlan
{
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

/// Geo(success_prob) on {1, 2, ...} by inverse CDF.
Count sample_geometric(double success_prob, RngStream& rng);

/// One draw from an increment law; +inf is returned as infinity().
double sample_law(const InfDivLaw& law, RngStream& rng);

SampleBatch sample_narrow(const NarrowParams& params, std::size_t n_samples,
                          const SamplingPlan& plan);
SampleBatch sample_wide(const WideParams& params, std::size_t n_samples,
                        const SamplingPlan& plan);
/// tau_k = min{n : X_1 + ... + X_n >= E_k} with E_k ~ Exp(1).
SampleBatch sample_definetti(const InfDivLaw& law, int dim, std::size_t n_samples,
                             const SamplingPlan& plan);

/// Coin-bias laws for the Bernoulli sieve. Y is the probability that a
/// player survives a round.
namespace mixing {
struct PointMass
{
    double value = 0.5;
};
struct Uniform
{
    double lower = 0;
    double upper = 1;
};
/// Quantile table at equally spaced probability levels 0, 1/m, ..., 1;
/// sampled by linear interpolation.
struct QuantileTable
{
    std::vector<double> quantiles;
};
/// Y = exp(-X) for an increment law X.
struct ExpOfLaw
{
    InfDivLaw law;
};
}  // namespace mixing

using MixingLaw = std::variant<mixing::PointMass, mixing::Uniform,
                               mixing::QuantileTable, mixing::ExpOfLaw>;

/// Throws MixingDegenerateAtOne when P(Y < 1) = 0.
void validate_mixing(const MixingLaw& law);
double sample_mixing(const MixingLaw& law, RngStream& rng);
/// E[Y^k].
double mixing_moment(const MixingLaw& law, int k);

SampleBatch sample_bernoulli_sieve(const MixingLaw& law, int dim,
                                   std::size_t n_samples, const SamplingPlan& plan);

struct PartitionStats
{
    int blocks_count = 0;
    /// Block sizes in order of increasing tau value.
    std::vector<int> blocks;
};

PartitionStats partition_stats(std::span<const Count> draw);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace geomlaw
