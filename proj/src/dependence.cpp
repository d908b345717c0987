#include "geomlaw/dependence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "geomlaw/sequences.hpp"

namespace geomlaw {
namespace {

void check_pair(int dim, int n, int m)
{
    if (n < 0 || m < 0 || n >= dim || m >= dim)
    {
        throw Error(ErrorCode::IndexOutOfRange,
                    "component index out of range for dimension " + std::to_string(dim));
    }
}

void check_open_unit(double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw Error(ErrorCode::OutOfRange, "parameter must lie in (0, 1)");
}

/// (1-p1)(1-p2)/sqrt(p1 p2) * (S - 1/((1-p1)(1-p2))) with S = sum_{i,j>=0} F(i,j).
double corr_from_sum(double p1, double p2, double s)
{
    const double q1 = 1.0 - p1;
    const double q2 = 1.0 - p2;
    return q1 * q2 / std::sqrt(p1 * p2) * (s - 1.0 / (q1 * q2));
}

std::vector<double> leading_one_values(const ExchangeableSeq& seq)
{
    seq.check_shape();
    if (seq.role == Role::BSeq || seq.role == Role::Beta)
        return seq.values;
    const bool narrow = seq.role == Role::PNarrow || seq.role == Role::ASeq;
    return convert(seq, narrow ? Role::BSeq : Role::Beta).values;
}

}  // namespace

double corr_narrow(const NarrowParams& params, int n, int m)
{
    check_pair(params.dim(), n, m);
    if (n == m)
        return 1.0;
    const std::uint32_t bn = 1u << n;
    const std::uint32_t bm = 1u << m;
    double one_only = 1.0;
    double both = 1.0;
    double either = 1.0;
    const std::uint32_t count = 1u << params.dim();
    for (std::uint32_t bits = 1; bits < count; ++bits)
    {
        const bool has_n = bits & bn;
        const bool has_m = bits & bm;
        if (has_n || has_m)
            either *= params[bits];
        if (has_n && has_m)
            both *= params[bits];
        else if (has_n || has_m)
            one_only *= params[bits];
    }
    return std::sqrt(one_only) * (1.0 - both) / (1.0 - either);
}

double corr_wide(const WideParams& params, int n, int m)
{
    check_pair(params.dim(), n, m);
    if (n == m)
        return 1.0;
    const std::uint32_t full = full_mask(params.dim());
    const double sn = params.subset_sum(full & ~(1u << n));
    const double sm = params.subset_sum(full & ~(1u << m));
    const double joint = params.subset_sum(full & ~((1u << n) | (1u << m)));
    if (!(sn > 0.0) || !(sm > 0.0))
    {
        throw Error(ErrorCode::DegenerateComponent,
                    "correlation undefined: a component is hit in the first trial almost surely");
    }
    return (joint - sn * sm) / ((1.0 - joint) * std::sqrt(sn * sm));
}

double corr_exchangeable(const ExchangeableSeq& seq)
{
    const std::vector<double> x = leading_one_values(seq);
    if (x.size() < 3)
        throw Error(ErrorCode::TooShort, "correlation needs d >= 2");
    return (x[2] - x[1] * x[1]) / (x[1] * (1.0 - x[2]));
}

double corr_exchangeable_from_a(const ExchangeableSeq& a)
{
    if (a.role != Role::ASeq)
        throw Error(ErrorCode::InvalidSequence, "expected an a sequence");
    a.check_shape();
    if (a.dim < 2)
        throw Error(ErrorCode::TooShort, "correlation needs d >= 2");
    const double a1 = a.values[0];
    const double a2 = a.values[1];
    return (a2 - a1) / (1.0 - a1 * a2);
}

double corr_frechet_lower(double p1, double p2)
{
    check_open_unit(p1);
    check_open_unit(p2);
    if (p1 + p2 <= 1.0)
        return -std::sqrt(p1 * p2);
    // Row i = 0 and column j = 0 in closed form; the rest of the positive
    // region {p1^i + p2^j > 1} is finite.
    double s = 1.0 / (1.0 - p2) + p1 / (1.0 - p1);
    for (double xi = p1; xi + p2 > 1.0; xi *= p1)
    {
        for (double yj = p2; xi + yj > 1.0; yj *= p2)
            s += xi + yj - 1.0;
    }
    return corr_from_sum(p1, p2, s);
}

double corr_frechet_upper(double p1, double p2)
{
    check_open_unit(p1);
    check_open_unit(p2);
    const double ratio = std::log(p1) / std::log(p2);
    const double tail = 1.0 / (1.0 - p2);
    // For each i the j-sum of min(p1^i, p2^j) splits at J_i.
    double s = 0;
    double xi = 1.0;
    for (long i = 0;; ++i, xi *= p1)
    {
        const double j_cut = std::floor(static_cast<double>(i) * ratio);
        const double term = (j_cut + 1.0) * xi + std::pow(p2, j_cut + 1.0) * tail;
        s += term;
        if (i > 0 && term < 1e-17 * s)
            break;
    }
    return corr_from_sum(p1, p2, s);
}

SurvivalFn frechet_lower_survival(double p1, double p2)
{
    check_open_unit(p1);
    check_open_unit(p2);
    return [p1, p2](std::span<const Count> n) {
        if (n.size() != 2)
            throw Error(ErrorCode::DimensionMismatch, "lower coupling is bivariate");
        const double v = std::pow(p1, static_cast<double>(n[0]))
                         + std::pow(p2, static_cast<double>(n[1])) - 1.0;
        return std::max(0.0, v);
    };
}

SurvivalFn frechet_upper_survival(std::vector<double> p)
{
    for (double v : p)
        check_open_unit(v);
    return [p = std::move(p)](std::span<const Count> n) {
        if (n.size() != p.size())
            throw Error(ErrorCode::DimensionMismatch, "argument length differs from d");
        double out = 1.0;
        for (std::size_t k = 0; k < p.size(); ++k)
            out = std::min(out, std::pow(p[k], static_cast<double>(n[k])));
        return out;
    };
}

MrtiVerdict mrti_exchangeable(const ExchangeableSeq& seq, double tolerance)
{
    const std::vector<double> x = leading_one_values(seq);
    if (!check_M(x, tolerance).member)
        throw Error(ErrorCode::NotASurvival, "sequence is not d+1-monotone");
    MrtiVerdict v;
    const int d = static_cast<int>(x.size()) - 1;
    for (int k = 1; k <= d - 1; ++k)
    {
        if (x[k] * x[k] > x[k - 1] * x[k + 1] + tolerance)
        {
            v.mrti = false;
            v.witness_k = k;
            return v;
        }
    }
    return v;
}

MrtiBruteVerdict mrti_bruteforce(const SurvivalFn& survival, int dim, int grid_max,
                                 double tolerance)
{
    if (dim < 1 || dim > 4 || grid_max < 0 || grid_max > 4)
        throw Error(ErrorCode::TooLarge, "brute-force MRTI needs d <= 4 and grid_max <= 4");
    MrtiBruteVerdict verdict;
    std::vector<int> perm(dim);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<Count> arg(dim), raised(dim);

    // P(tau_{perm[i]} > arg | earlier components beyond their thresholds).
    auto conditional = [&](const std::vector<Count>& point, int target) -> std::optional<double> {
        std::vector<Count> cond = point;
        cond[target] = 0;
        const double denom = survival(cond);
        if (!(denom > 0.0))
            return std::nullopt;
        return survival(point) / denom;
    };

    do
    {
        for (int i = 1; i < dim; ++i)
        {
            const int span = i + 1;
            std::vector<Count> v(span, 0);
            while (true)
            {
                std::fill(arg.begin(), arg.end(), 0);
                for (int k = 0; k < span; ++k)
                    arg[perm[k]] = v[k];
                const auto before = conditional(arg, perm[i]);
                if (before)
                {
                    for (int j = 0; j < i; ++j)
                    {
                        raised = arg;
                        raised[perm[j]] += 1;
                        const auto after = conditional(raised, perm[i]);
                        if (after && *after < *before - tolerance)
                        {
                            verdict.mrti = false;
                            verdict.witness = MrtiWitness{perm, i, j, arg, *before, *after};
                            return verdict;
                        }
                    }
                }
                int k = 0;
                while (k < span && v[k] == static_cast<Count>(grid_max))
                    v[k++] = 0;
                if (k == span)
                    break;
                ++v[k];
            }
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return verdict;
}

namespace {

template <class Params, class CorrFn>
DependenceReport build_report(const Params& params, CorrFn corr)
{
    DependenceReport report;
    const int d = params.dim();
    report.dim = d;
    report.corr.assign(d, std::vector<double>(d, 1.0));
    for (int n = 0; n < d; ++n)
    {
        for (int m = n + 1; m < d; ++m)
        {
            const double c = corr(params, n, m);
            report.corr[n][m] = c;
            report.corr[m][n] = c;
        }
    }
    return report;
}

void attach_mrti(DependenceReport& report, const ExchangeabilityVerdict& ex,
                 const SurvivalFn& survival, Role lead)
{
    if (ex.exchangeable)
    {
        report.notes.emplace_back("exchangeable");
        const ExchangeableSeq x = convert(*ex.seq, lead);
        const MrtiVerdict v = mrti_exchangeable(x);
        report.mrti = v.mrti;
        report.mrti_witness = v.witness_k;
        report.notes.emplace_back("mrti from beta_k^2 <= beta_{k-1} beta_{k+1}");
    }
    else if (report.dim <= 4)
    {
        report.mrti = mrti_bruteforce(survival, report.dim, 2).mrti;
        report.notes.emplace_back("mrti from exhaustive check on {0..2}^d");
    }
    else
    {
        report.notes.emplace_back("mrti not evaluated: non-exchangeable with d > 4");
    }
}

}  // namespace

DependenceReport dependence_report(const NarrowParams& params)
{
    DependenceReport report =
        build_report(params, [](const NarrowParams& p, int n, int m) { return corr_narrow(p, n, m); });
    report.notes.emplace_back("narrow-sense: correlations are non-negative");
    attach_mrti(report, is_exchangeable(params), survival_fn(params), Role::BSeq);
    return report;
}

DependenceReport dependence_report(const WideParams& params)
{
    DependenceReport report =
        build_report(params, [](const WideParams& p, int n, int m) { return corr_wide(p, n, m); });
    report.notes.emplace_back("wide-sense: correlations are bounded below by -0.5");
    attach_mrti(report, is_exchangeable(params), survival_fn(params), Role::Beta);
    return report;
}

}  // namespace geomlaw
