#include "geomlaw/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "geomlaw/dependence.hpp"
#include "geomlaw/extendibility.hpp"
#include "geomlaw/sequences.hpp"

namespace geomlaw {

std::vector<Count> SurvivalGrid::point(std::size_t cell) const
{
    std::vector<Count> n(dim);
    const std::size_t side = grid_max + 1;
    for (int k = dim - 1; k >= 0; --k)
    {
        n[k] = cell % side;
        cell /= side;
    }
    return n;
}

std::size_t SurvivalGrid::index(std::span<const Count> n) const
{
    std::size_t cell = 0;
    for (int k = 0; k < dim; ++k)
        cell = cell * (grid_max + 1) + n[k];
    return cell;
}

namespace {

SurvivalGrid empty_grid(int dim, int grid_max)
{
    SurvivalGrid g;
    g.dim = dim;
    g.grid_max = grid_max;
    std::size_t cells = 1;
    for (int k = 0; k < dim; ++k)
        cells *= grid_max + 1;
    g.values.assign(cells, 0.0);
    g.error_bound.assign(cells, 0.0);
    return g;
}

/// Turns a mass table on {1..side}^d (index t-1 per axis) into
/// P(tau > n) for n in {0..side-1}^d via suffix sums along each axis.
std::vector<double> suffix_sums(std::vector<double> mass, int dim, std::size_t side)
{
    std::size_t stride = 1;
    for (int axis = dim - 1; axis >= 0; --axis)
    {
        for (std::size_t cell = mass.size(); cell-- > 0;)
        {
            const std::size_t coord = (cell / stride) % side;
            if (coord + 1 < side)
                mass[cell] += mass[cell + stride];
        }
        stride *= side;
    }
    return mass;
}

}  // namespace

SurvivalGrid analytic_grid(const SurvivalFn& survival, int dim, int grid_max)
{
    SurvivalGrid g = empty_grid(dim, grid_max);
    for (std::size_t cell = 0; cell < g.cells(); ++cell)
        g.values[cell] = survival(g.point(cell));
    return g;
}

SurvivalGrid enumerate_narrow(const NarrowParams& params, int horizon)
{
    const int dim = params.dim();
    if (dim > 3 || horizon < 1 || horizon > 8)
        throw Error(ErrorCode::TooLarge, "exhaustive enumeration needs d <= 3 and 1 <= H <= 8");
    const std::uint32_t shocks = (1u << dim) - 1;
    const std::size_t atoms = horizon + 1;  // values 1..H and the lumped tail

    // weights[s][e-1] = P(E_s = e), last slot P(E_s > H).
    std::vector<std::vector<double>> weights(shocks, std::vector<double>(atoms));
    for (std::uint32_t s = 0; s < shocks; ++s)
    {
        const double p = params[s + 1];
        double tail = 1.0;
        for (int e = 1; e <= horizon; ++e)
        {
            weights[s][e - 1] = tail * (1.0 - p);
            tail *= p;
        }
        weights[s][horizon] = tail;
    }

    // Joint mass of tau capped at H+1, on {1..H+1}^d.
    std::size_t states = 1;
    for (int k = 0; k < dim; ++k)
        states *= atoms;
    std::vector<double> mass(states, 0.0);

    std::vector<Count> tau(dim);
    auto recurse = [&](auto&& self, std::uint32_t s, const std::vector<Count>& current,
                       double weight) -> void {
        if (weight == 0.0)
            return;
        if (s == shocks)
        {
            std::size_t cell = 0;
            for (int k = 0; k < dim; ++k)
                cell = cell * atoms + (current[k] - 1);
            mass[cell] += weight;
            return;
        }
        const std::uint32_t bits = s + 1;
        std::vector<Count> next(current);
        for (std::size_t e = 1; e <= atoms; ++e)
        {
            for (int k = 0; k < dim; ++k)
            {
                if (bits & (1u << k))
                    next[k] = std::min<Count>(current[k], e);
            }
            self(self, s + 1, next, weight * weights[s][e - 1]);
        }
    };
    recurse(recurse, 0, std::vector<Count>(dim, atoms), 1.0);

    const std::vector<double> full = suffix_sums(std::move(mass), dim, atoms);
    SurvivalGrid g = empty_grid(dim, horizon - 1);
    for (std::size_t cell = 0; cell < g.cells(); ++cell)
    {
        const std::vector<Count> n = g.point(cell);
        std::size_t src = 0;
        for (int k = 0; k < dim; ++k)
            src = src * atoms + n[k];
        g.values[cell] = full[src];
    }
    return g;
}

SurvivalGrid empirical_grid(const SampleBatch& batch, int grid_max)
{
    if (batch.n_samples == 0)
        throw Error(ErrorCode::EmptyBatch, "empirical grid needs at least one draw");
    const int dim = batch.dim;
    const std::size_t side = grid_max + 1;
    std::size_t states = 1;
    for (int k = 0; k < dim; ++k)
        states *= side;
    std::vector<double> counts(states, 0.0);
    for (std::size_t i = 0; i < batch.n_samples; ++i)
    {
        const auto row = batch.row(i);
        std::size_t cell = 0;
        for (int k = 0; k < dim; ++k)
            cell = cell * side + (std::min<Count>(row[k], side) - 1);
        counts[cell] += 1.0;
    }
    const std::vector<double> tails = suffix_sums(std::move(counts), dim, side);
    SurvivalGrid g = empty_grid(dim, grid_max);
    const double n = static_cast<double>(batch.n_samples);
    for (std::size_t cell = 0; cell < g.cells(); ++cell)
    {
        const double f = tails[cell] / n;
        g.values[cell] = f;
        g.error_bound[cell] = tol::kMonteCarloSigmas * std::sqrt(f * (1.0 - f) / n) + 1.0 / n;
    }
    return g;
}

GridComparison compare_grids(const SurvivalGrid& a, const SurvivalGrid& b, double tolerance)
{
    if (a.dim != b.dim || a.grid_max != b.grid_max || a.cells() != b.cells())
        throw Error(ErrorCode::ShapeMismatch, "grids differ in dimension or extent");
    GridComparison out;
    out.worst_excess = -std::numeric_limits<double>::infinity();
    for (std::size_t cell = 0; cell < a.cells(); ++cell)
    {
        const double dev = std::abs(a.values[cell] - b.values[cell]);
        const double excess = dev - (a.error_bound[cell] + b.error_bound[cell] + tolerance);
        out.max_abs_deviation = std::max(out.max_abs_deviation, dev);
        if (excess > out.worst_excess)
        {
            out.worst_excess = excess;
            out.worst_cell = a.point(cell);
        }
    }
    out.pass = out.worst_excess <= 0.0;
    return out;
}

NarrowParams random_narrow(int dim, RngStream& rng)
{
    for (;;)
    {
        RawParamMap raw;
        for (std::uint32_t bits = 1; bits < (1u << dim); ++bits)
            raw[bits] = rng.uniform() < 0.2 ? 1.0 : 0.2 + 0.8 * rng.uniform();
        try
        {
            return validate_narrow(raw, dim);
        }
        catch (const Error&)
        {
        }
    }
}

WideParams random_wide(int dim, RngStream& rng)
{
    for (;;)
    {
        const std::uint32_t count = 1u << dim;
        std::vector<double> w(count);
        double total = 0;
        for (auto& v : w)
        {
            v = rng.uniform() < 0.2 ? 0.0 : rng.exponential();
            total += v;
        }
        if (!(total > 0.0))
            continue;
        RawParamMap raw;
        double sum = 0;
        for (std::uint32_t bits = 0; bits + 1 < count; ++bits)
        {
            raw[bits] = w[bits] / total;
            sum += raw[bits];
        }
        raw[count - 1] = std::max(0.0, 1.0 - sum);
        try
        {
            WideParams params = validate_wide(raw, dim);
            bool degenerate = false;
            for (int k = 0; k < dim; ++k)
                degenerate = degenerate || !(params.subset_sum(full_mask(dim) & ~(1u << k)) > 0.0);
            if (!degenerate)
                return params;
        }
        catch (const Error&)
        {
        }
    }
}

ExchangeableSeq random_moment_beta(int dim, RngStream& rng)
{
    const int atoms = 1 + static_cast<int>(rng() % 5);
    std::vector<double> loc(atoms), weight(atoms);
    double total = 0;
    for (int i = 0; i < atoms; ++i)
    {
        loc[i] = rng.uniform();
        weight[i] = rng.uniform_open();
        total += weight[i];
    }
    std::vector<double> beta(dim + 1, 0.0);
    for (int k = 0; k <= dim; ++k)
    {
        for (int i = 0; i < atoms; ++i)
            beta[k] += weight[i] / total * std::pow(loc[i], k);
    }
    beta[0] = 1.0;
    return make_seq(Role::Beta, std::move(beta));
}

ExchangeableSeq random_simplex_beta(int dim, RngStream& rng)
{
    for (;;)
    {
        // Mass of each cardinality class 0..d, spread evenly within the class.
        std::vector<double> mass(dim + 1);
        double total = 0;
        for (auto& m : mass)
        {
            m = rng.uniform() < 0.15 ? 0.0 : rng.exponential();
            total += m;
        }
        if (!(total > 0.0))
            continue;
        std::vector<double> pt(dim);
        for (int i = 1; i <= dim; ++i)
            pt[i - 1] = mass[i - 1] / total / static_cast<double>(binomial(dim, i - 1));
        try
        {
            return beta_from_ptilde(make_seq(Role::PTilde, std::move(pt)));
        }
        catch (const Error&)
        {
        }
    }
}

ExchangeableSeq perturb_out_of_M(const ExchangeableSeq& beta, RngStream& rng, double margin)
{
    const int d = beta.dim;
    for (int attempt = 0; attempt < 1000; ++attempt)
    {
        const int k = 1 + static_cast<int>(rng() % d);
        const double sign = (rng() & 1u) ? 1.0 : -1.0;
        for (double step = margin; step <= 2.0; step *= 1.5)
        {
            std::vector<double> x = beta.values;
            x[k] = std::clamp(x[k] + sign * step, 0.0, 1.0);
            if (!(x[1] < 1.0))
                break;
            const Verdict v = check_M(x);
            if (!v.member && v.witness && !v.boundary_failure && v.witness->value <= -margin)
                return make_seq(Role::Beta, std::move(x));
            if (x[k] == 0.0 || x[k] == 1.0)
                break;
        }
    }
    throw Error(ErrorCode::InvalidSequence, "could not perturb sequence out of M");
}

double min_pmf_cell(const SurvivalFn& survival, int dim, Count lo, Count hi)
{
    double best = std::numeric_limits<double>::infinity();
    std::vector<Count> n(dim, lo), arg(dim);
    const std::uint32_t corners = 1u << dim;
    for (;;)
    {
        double sum = 0;
        for (std::uint32_t s = 0; s < corners; ++s)
        {
            for (int i = 0; i < dim; ++i)
                arg[i] = n[i] - 1 + ((s >> i) & 1u);
            const double v = survival(arg);
            sum += (std::popcount(s) % 2 == 0) ? v : -v;
        }
        best = std::min(best, sum);
        int k = 0;
        while (k < dim && n[k] == hi)
            n[k++] = lo;
        if (k == dim)
            break;
        ++n[k];
    }
    return best;
}

namespace {

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

HarnessResult bridge_harness(RngStream& rng)
{
    HarnessResult r{"narrow-wide-bridge", true, 0, 1e-12, ""};
    for (int t = 0; t < 100; ++t)
    {
        const int d = 2 + t % 2;
        const NarrowParams narrow = random_narrow(d, rng);
        const WideParams wide = wide_from_narrow(narrow);
        const GridComparison c = compare_grids(analytic_grid(survival_fn(narrow), d, 4),
                                               analytic_grid(survival_fn(wide), d, 4), 1e-12);
        r.metric = std::max(r.metric, c.max_abs_deviation);
        r.pass = r.pass && c.pass;
    }
    r.detail = "100 random narrow models, grid {0..4}^d";
    return r;
}

HarnessResult pmf_sufficiency_harness(RngStream& rng)
{
    HarnessResult r{"pmf-nonnegative-on-M", true, 0, -1e-10, ""};
    r.metric = std::numeric_limits<double>::infinity();
    for (int t = 0; t < 500; ++t)
    {
        const ExchangeableSeq beta = random_moment_beta(3, rng);
        r.metric = std::min(r.metric, min_pmf_cell(survival_fn(beta), 3, 1, 6));
    }
    r.pass = r.metric >= r.threshold;
    r.detail = "500 moment sequences, min pmf over {1..6}^3";
    return r;
}

HarnessResult pmf_necessity_harness(RngStream& rng)
{
    HarnessResult r{"pmf-negative-off-M", true, -1e300, -1e-8, ""};
    for (int t = 0; t < 100; ++t)
    {
        const ExchangeableSeq beta = perturb_out_of_M(random_moment_beta(3, rng), rng);
        r.metric = std::max(r.metric, min_pmf_cell(survival_fn(beta), 3, 1, 6));
    }
    r.pass = r.metric < r.threshold;
    r.detail = "100 perturbed non-members, largest per-instance min pmf";
    return r;
}

HarnessResult lm_harness(RngStream& rng)
{
    HarnessResult r{"lack-of-memory", true, 0, 1e-12, ""};
    for (int t = 0; t < 50; ++t)
    {
        const int d = 2 + t % 3;
        const NarrowParams narrow = random_narrow(d, rng);
        const WideParams wide = random_wide(d, rng);
        const LmVerdict a = check_lm_property(survival_fn(narrow), d, 10000, 20, rng);
        const LmVerdict b = check_lm_property(survival_fn(wide), d, 10000, 20, rng);
        r.metric = std::max({r.metric, a.max_relative_violation, b.max_relative_violation});
    }
    r.pass = r.metric <= r.threshold;
    r.detail = "50 models per family, 1e4 tuples each";
    return r;
}

HarnessResult mrti_harness(RngStream& rng)
{
    HarnessResult r{"mrti-closed-form-vs-exhaustive", true, 0, 0, ""};
    int disagreements = 0;
    for (int t = 0; t < 200; ++t)
    {
        const ExchangeableSeq beta =
            t % 2 == 0 ? random_moment_beta(3, rng) : random_simplex_beta(3, rng);
        const bool closed = mrti_exchangeable(beta).mrti;
        const bool brute = mrti_bruteforce(survival_fn(beta), 3, 3).mrti;
        disagreements += closed != brute;
    }
    r.metric = disagreements;
    r.pass = disagreements == 0;
    r.detail = "200 sequences in M_4, grid {0..3}^3";
    return r;
}

HarnessResult oracle_harness(RngStream& rng)
{
    HarnessResult r{"exhaustive-enumeration", true, 0, 1e-12, ""};
    for (int t = 0; t < 50; ++t)
    {
        const int d = 2 + t % 2;
        const NarrowParams params = random_narrow(d, rng);
        const GridComparison c =
            compare_grids(enumerate_narrow(params, 8), analytic_grid(survival_fn(params), d, 7));
        r.metric = std::max(r.metric, c.max_abs_deviation);
        r.pass = r.pass && c.pass;
    }
    r.detail = "50 random models, grid {0..7}^d";
    return r;
}

HarnessResult corr_bound_harness(RngStream& rng)
{
    HarnessResult r{"wide-correlation-bound", true, 0, -0.5 - 1e-12, ""};
    r.metric = std::numeric_limits<double>::infinity();
    for (int t = 0; t < 10000; ++t)
    {
        const WideParams params = random_wide(2 + t % 3, rng);
        for (int n = 0; n < params.dim(); ++n)
            for (int m = n + 1; m < params.dim(); ++m)
                r.metric = std::min(r.metric, corr_wide(params, n, m));
    }
    r.pass = r.metric >= r.threshold;
    r.detail = "min pairwise correlation over 1e4 random wide models";
    return r;
}

HarnessResult monte_carlo_harness(std::uint64_t seed)
{
    HarnessResult r{"definetti-gamma-monte-carlo", true, 0, 0, ""};
    const InfDivLaw gamma = law::Gamma{2.0, 3.0};
    const SampleBatch batch = sample_definetti(gamma, 3, 1'000'000, {seed, 1});
    const ExchangeableSeq b = laplace_moments(gamma, 3, Role::BSeq);
    const GridComparison c =
        compare_grids(empirical_grid(batch, 3), analytic_grid(survival_fn(b), 3, 3), 0.0);
    r.metric = c.worst_excess;
    r.pass = c.pass;
    r.detail = "N = 1e6, grid {0..3}^3, per-cell 3 sigma; metric is worst excess over band";
    return r;
}

}  // namespace

std::vector<HarnessResult> run_harnesses(const std::string& suite, std::uint64_t seed)
{
    if (suite != "all" && suite != "quick")
        throw Error(ErrorCode::Parse, "unknown suite '" + suite + "' (expected all or quick)");
    RngStream rng(seed);
    std::vector<HarnessResult> out;
    out.push_back(bridge_harness(rng));
    out.push_back(pmf_sufficiency_harness(rng));
    out.push_back(pmf_necessity_harness(rng));
    out.push_back(lm_harness(rng));
    out.push_back(mrti_harness(rng));
    out.push_back(corr_bound_harness(rng));
    if (suite == "all")
    {
        out.push_back(oracle_harness(rng));
        out.push_back(monte_carlo_harness(seed));
    }
    for (auto& h : out)
    {
        if (h.detail.empty())
            h.detail = fmt(h.metric);
    }
    return out;
}

}  // namespace geomlaw
