#include "geomlaw/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <thread>

namespace geomlaw {
namespace {

constexpr std::uint64_t kLoopCap = 1'000'000'000ULL;

std::string digest_text(std::span<const double> values)
{
    std::string text;
    char buf[32];
    for (double v : values)
    {
        std::snprintf(buf, sizeof buf, "%.17g;", v);
        text += buf;
    }
    return text;
}

/// Splits rows into `workers` contiguous chunks and fills chunk w from
/// substream w. `draw(rng, out)` writes one row.
template <class Draw>
SampleBatch run_plan(int dim, std::size_t n_samples, const SamplingPlan& plan,
                     Provenance provenance, Draw draw)
{
    const unsigned workers = std::max(1u, plan.workers);
    SampleBatch batch;
    batch.dim = dim;
    batch.n_samples = n_samples;
    batch.data.assign(n_samples * static_cast<std::size_t>(dim), 0);
    provenance.seed = plan.seed;
    provenance.workers = workers;
    batch.provenance = std::move(provenance);

    auto chunk = [&](unsigned w) {
        const std::size_t base = n_samples / workers;
        const std::size_t extra = n_samples % workers;
        const std::size_t begin = w * base + std::min<std::size_t>(w, extra);
        const std::size_t end = begin + base + (w < extra ? 1 : 0);
        RngStream rng = RngStream::substream(plan.seed, w);
        for (std::size_t i = begin; i < end; ++i)
            draw(rng, std::span<Count>(batch.data.data() + i * dim, dim));
    };

    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    for (unsigned w = 1; w < workers; ++w)
    {
        threads.emplace_back([&, w] {
            try
            {
                chunk(w);
            }
            catch (...)
            {
                errors[w] = std::current_exception();
            }
        });
    }
    try
    {
        chunk(0);
    }
    catch (...)
    {
        errors[0] = std::current_exception();
    }
    for (auto& t : threads)
        t.join();
    for (auto& e : errors)
    {
        if (e)
            std::rethrow_exception(e);
    }
    return batch;
}

Count to_count(double value)
{
    if (value >= 1.8e19)
        throw Error(ErrorCode::TooLarge, "sampled waiting time overflows 64 bits");
    return static_cast<Count>(value);
}

}  // namespace

Count sample_geometric(double success_prob, RngStream& rng)
{
    if (!(success_prob > 0.0 && success_prob <= 1.0))
    {
        throw Error(ErrorCode::OutOfRange,
                    "geometric success probability must lie in (0, 1], got "
                        + std::to_string(success_prob));
    }
    if (success_prob == 1.0)
        return 1;
    const double u = rng.uniform_open();
    const double t = std::ceil(std::log(u) / std::log1p(-success_prob));
    return std::max<Count>(1, to_count(t));
}

double sample_law(const InfDivLaw& law, RngStream& rng)
{
    return std::visit(
        [&rng](const auto& l) -> double {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, law::Degenerate>)
            {
                return l.value;
            }
            else if constexpr (std::is_same_v<T, law::Gamma>)
            {
                std::gamma_distribution<double> g(l.shape, 1.0 / l.rate);
                return g(rng);
            }
            else if constexpr (std::is_same_v<T, law::CompoundPoissonExp>)
            {
                std::poisson_distribution<long> jumps(l.intensity);
                const long count = jumps(rng);
                double total = 0;
                for (long j = 0; j < count; ++j)
                    total += rng.exponential();
                return total / l.jump_rate;
            }
            else if constexpr (std::is_same_v<T, law::GeometricKilled>)
            {
                if (rng.uniform() >= l.finite_mass)
                    return law::kInfinity;
                return static_cast<double>(sample_geometric(1.0 - l.p, rng));
            }
            else
            {
                return rng.uniform() < l.q ? l.level : 0.0;
            }
        },
        law);
}

SampleBatch sample_narrow(const NarrowParams& params, std::size_t n_samples,
                          const SamplingPlan& plan)
{
    const int dim = params.dim();
    struct Shock
    {
        std::uint32_t bits;
        double success;
    };
    std::vector<Shock> shocks;
    const std::uint32_t count = 1u << dim;
    for (std::uint32_t bits = 1; bits < count; ++bits)
    {
        if (params[bits] < 1.0)
            shocks.push_back({bits, 1.0 - params[bits]});
    }
    Provenance prov;
    prov.model = "narrow";
    prov.params_digest = fnv1a64("narrow:" + digest_text(params.map().values()));

    return run_plan(dim, n_samples, plan, prov, [&](RngStream& rng, std::span<Count> out) {
        std::fill(out.begin(), out.end(), std::numeric_limits<Count>::max());
        for (const Shock& s : shocks)
        {
            const Count e = sample_geometric(s.success, rng);
            for (std::uint32_t b = s.bits; b != 0; b &= b - 1)
            {
                const int k = std::countr_zero(b);
                out[k] = std::min(out[k], e);
            }
        }
    });
}

SampleBatch sample_wide(const WideParams& params, std::size_t n_samples,
                        const SamplingPlan& plan)
{
    const int dim = params.dim();
    const std::uint32_t count = 1u << dim;
    std::vector<double> cdf(count);
    double running = 0;
    for (std::uint32_t bits = 0; bits < count; ++bits)
    {
        running += params[bits];
        cdf[bits] = running;
    }
    Provenance prov;
    prov.model = "wide";
    prov.params_digest = fnv1a64("wide:" + digest_text(params.map().values()));

    return run_plan(dim, n_samples, plan, prov, [&](RngStream& rng, std::span<Count> out) {
        std::uint32_t remaining = count - 1;
        for (Count trial = 1; remaining != 0; ++trial)
        {
            if (trial > kLoopCap)
                throw Error(ErrorCode::TooLarge, "wide-sense trial loop exceeded 1e9 steps");
            const double u = rng.uniform() * running;
            auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            if (it == cdf.end())
                --it;
            const auto outcome = static_cast<std::uint32_t>(it - cdf.begin());
            for (std::uint32_t hit = outcome & remaining; hit != 0; hit &= hit - 1)
                out[std::countr_zero(hit)] = trial;
            remaining &= ~outcome;
        }
    });
}

SampleBatch sample_definetti(const InfDivLaw& law, int dim, std::size_t n_samples,
                             const SamplingPlan& plan)
{
    check_dim(dim);
    validate_law(law);
    if (!(prob_zero(law) < 1.0))
        throw Error(ErrorCode::DegenerateAtZero, "increment law is a point mass at 0");
    Provenance prov;
    prov.model = "definetti:" + law_name(law);
    const std::vector<double> moments = laplace_moments(law, 2, Role::Beta).values;
    prov.params_digest = fnv1a64(prov.model + ":" + digest_text(moments));

    return run_plan(dim, n_samples, plan, prov, [&](RngStream& rng, std::span<Count> out) {
        std::vector<std::pair<double, int>> thresholds(dim);
        for (int k = 0; k < dim; ++k)
            thresholds[k] = {rng.exponential(), k};
        std::sort(thresholds.begin(), thresholds.end());
        double walk = 0;
        int next = 0;
        for (Count step = 1; next < dim; ++step)
        {
            if (step > kLoopCap)
                throw Error(ErrorCode::TooLarge, "random walk exceeded 1e9 steps");
            walk += sample_law(law, rng);
            while (next < dim && walk >= thresholds[next].first)
                out[thresholds[next++].second] = step;
        }
    });
}

void validate_mixing(const MixingLaw& law)
{
    auto degenerate = [] {
        throw Error(ErrorCode::MixingDegenerateAtOne, "mixing law puts all mass at 1");
    };
    auto range = [](const std::string& what) { throw Error(ErrorCode::OutOfRange, what); };
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, mixing::PointMass>)
            {
                if (!(m.value >= 0.0 && m.value <= 1.0))
                    range("point mass must lie in [0, 1]");
                if (m.value == 1.0)
                    degenerate();
            }
            else if constexpr (std::is_same_v<T, mixing::Uniform>)
            {
                if (!(m.lower >= 0.0 && m.lower <= m.upper && m.upper <= 1.0))
                    range("uniform bounds must satisfy 0 <= lower <= upper <= 1");
                if (m.lower == 1.0)
                    degenerate();
            }
            else if constexpr (std::is_same_v<T, mixing::QuantileTable>)
            {
                if (m.quantiles.size() < 2)
                    range("quantile table needs at least 2 entries");
                for (std::size_t i = 0; i < m.quantiles.size(); ++i)
                {
                    const double q = m.quantiles[i];
                    if (!(q >= 0.0 && q <= 1.0) || (i > 0 && q < m.quantiles[i - 1]))
                        range("quantiles must be non-decreasing values in [0, 1]");
                }
                if (m.quantiles.front() == 1.0)
                    degenerate();
            }
            else
            {
                validate_law(m.law);
                if (!(prob_zero(m.law) < 1.0))
                    degenerate();
            }
        },
        law);
}

double sample_mixing(const MixingLaw& law, RngStream& rng)
{
    return std::visit(
        [&rng](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, mixing::PointMass>)
            {
                return m.value;
            }
            else if constexpr (std::is_same_v<T, mixing::Uniform>)
            {
                return m.lower + (m.upper - m.lower) * rng.uniform();
            }
            else if constexpr (std::is_same_v<T, mixing::QuantileTable>)
            {
                const double pos = rng.uniform() * static_cast<double>(m.quantiles.size() - 1);
                const auto i = static_cast<std::size_t>(pos);
                const double t = pos - static_cast<double>(i);
                return m.quantiles[i] + t * (m.quantiles[i + 1] - m.quantiles[i]);
            }
            else
            {
                return std::exp(-sample_law(m.law, rng));
            }
        },
        law);
}

double mixing_moment(const MixingLaw& law, int k)
{
    // Mean of y^k for y uniform on [a, b].
    auto segment = [k](double a, double b) {
        if (b - a <= 0.0)
            return std::pow(a, k);
        return (std::pow(b, k + 1) - std::pow(a, k + 1)) / ((k + 1) * (b - a));
    };
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, mixing::PointMass>)
            {
                return std::pow(m.value, k);
            }
            else if constexpr (std::is_same_v<T, mixing::Uniform>)
            {
                return segment(m.lower, m.upper);
            }
            else if constexpr (std::is_same_v<T, mixing::QuantileTable>)
            {
                double total = 0;
                for (std::size_t i = 0; i + 1 < m.quantiles.size(); ++i)
                    total += segment(m.quantiles[i], m.quantiles[i + 1]);
                return total / static_cast<double>(m.quantiles.size() - 1);
            }
            else
            {
                return laplace_transform(m.law, k);
            }
        },
        law);
}

SampleBatch sample_bernoulli_sieve(const MixingLaw& law, int dim, std::size_t n_samples,
                                   const SamplingPlan& plan)
{
    check_dim(dim);
    validate_mixing(law);
    Provenance prov;
    prov.model = "bernoulli-sieve";
    std::vector<double> moments;
    for (int k = 1; k <= 3; ++k)
        moments.push_back(mixing_moment(law, k));
    prov.params_digest = fnv1a64("sieve:" + digest_text(moments));

    return run_plan(dim, n_samples, plan, prov, [&](RngStream& rng, std::span<Count> out) {
        std::uint32_t alive = full_mask(dim);
        for (Count round = 1; alive != 0; ++round)
        {
            if (round > kLoopCap)
                throw Error(ErrorCode::TooLarge, "sieve exceeded 1e9 rounds");
            const double y = sample_mixing(law, rng);
            for (std::uint32_t b = alive; b != 0; b &= b - 1)
            {
                const int k = std::countr_zero(b);
                if (rng.uniform() >= y)
                {
                    out[k] = round;
                    alive &= ~(1u << k);
                }
            }
        }
    });
}

PartitionStats partition_stats(std::span<const Count> draw)
{
    std::vector<Count> sorted(draw.begin(), draw.end());
    std::sort(sorted.begin(), sorted.end());
    PartitionStats stats;
    for (std::size_t i = 0; i < sorted.size(); ++i)
    {
        if (i == 0 || sorted[i] != sorted[i - 1])
            stats.blocks.push_back(0);
        ++stats.blocks.back();
    }
    stats.blocks_count = static_cast<int>(stats.blocks.size());
    return stats;
}

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes)
    {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

}  // namespace geomlaw
