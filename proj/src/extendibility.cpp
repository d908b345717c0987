#include "geomlaw/extendibility.hpp"

#include <algorithm>
#include <cmath>

namespace geomlaw {
namespace {

void require_row(const ExchangeableSeq& row, Role role)
{
    if (row.role != role)
    {
        throw Error(ErrorCode::InvalidSequence,
                    "expected a " + std::string(to_string(role)) + " row");
    }
    row.check_shape();
}

/// Alternating tail sum c_m = sum_{i=m}^{d} (-1)^{i-m} v_i (1-based m).
double alternating_tail(const std::vector<double>& v, int m)
{
    double c = 0;
    for (int i = m; i <= static_cast<int>(v.size()); ++i)
        c += ((i - m) % 2 == 0 ? 1.0 : -1.0) * v[i - 1];
    return c;
}

/// Sign of q in the unrolled entry m of the new row.
double q_sign(int d, int m)
{
    return (d + 1 - m) % 2 == 0 ? 1.0 : -1.0;
}

void raise_lower(ExtensionInterval& iv, double value, bool open)
{
    if (value > iv.lower || (value == iv.lower && open))
    {
        iv.lower = value;
        iv.open_lower = open;
    }
}

void cut_upper(ExtensionInterval& iv, double value, bool open)
{
    if (value < iv.upper || (value == iv.upper && open))
    {
        iv.upper = value;
        iv.open_upper = open;
    }
}

template <class T>
constexpr bool always_false = false;

}  // namespace

ExtensionInterval extend_one_narrow(const ExchangeableSeq& p_row)
{
    require_row(p_row, Role::PNarrow);
    for (double v : p_row.values)
    {
        if (!(v > 0.0 && v <= 1.0))
            throw Error(ErrorCode::InvalidSequence, "narrow row entries must lie in (0, 1]");
    }
    const int d = p_row.dim;
    std::vector<double> logs(d);
    for (int i = 0; i < d; ++i)
        logs[i] = std::log(p_row.values[i]);

    ExtensionInterval iv{0.0, 1.0, true, false};
    // ln p_{m,d+1} = c_m + s_m ln q must be <= 0.
    for (int m = 1; m <= d; ++m)
    {
        const double c = alternating_tail(logs, m);
        if (q_sign(d, m) > 0)
            cut_upper(iv, std::exp(-c), false);
        else
            raise_lower(iv, std::exp(c), false);
    }
    return iv;
}

ExtensionInterval extend_one_wide(const ExchangeableSeq& ptilde_row)
{
    require_row(ptilde_row, Role::PTilde);
    const int d = ptilde_row.dim;
    double full = 1.0;
    for (int i = 1; i <= d; ++i)
        full -= static_cast<double>(binomial(d, i - 1)) * ptilde_row.values[i - 1];

    ExtensionInterval iv{0.0, 1.0, false, false};
    // p~_{m,d+1} = c_m + s_m q must lie in [0, 1].
    for (int m = 1; m <= d; ++m)
    {
        const double c = alternating_tail(ptilde_row.values, m);
        if (q_sign(d, m) > 0)
        {
            raise_lower(iv, -c, false);
            cut_upper(iv, 1.0 - c, false);
        }
        else
        {
            raise_lower(iv, c - 1.0, false);
            cut_upper(iv, c, false);
        }
    }
    // The new full-set weight is full - q.
    cut_upper(iv, full, false);
    return iv;
}

std::vector<double> extension_row_narrow(const ExchangeableSeq& p_row, double q)
{
    require_row(p_row, Role::PNarrow);
    const int d = p_row.dim;
    std::vector<double> row(d + 1);
    row[d] = q;
    double log_next = std::log(q);
    for (int m = d; m >= 1; --m)
    {
        const double log_m = std::log(p_row.values[m - 1]) - log_next;
        row[m - 1] = std::exp(log_m);
        log_next = log_m;
    }
    return row;
}

std::vector<double> extension_row_wide(const ExchangeableSeq& ptilde_row, double q)
{
    require_row(ptilde_row, Role::PTilde);
    const int d = ptilde_row.dim;
    std::vector<double> row(d + 1);
    row[d] = q;
    for (int m = d; m >= 1; --m)
        row[m - 1] = ptilde_row.values[m - 1] - row[m];
    return row;
}

std::string law_name(const InfDivLaw& law)
{
    return std::visit(
        [](const auto& l) -> std::string {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, law::Degenerate>)
                return "degenerate";
            else if constexpr (std::is_same_v<T, law::Gamma>)
                return "gamma";
            else if constexpr (std::is_same_v<T, law::CompoundPoissonExp>)
                return "compound-poisson-exp";
            else if constexpr (std::is_same_v<T, law::GeometricKilled>)
                return "geometric-killed";
            else if constexpr (std::is_same_v<T, law::Bernoulli>)
                return "bernoulli";
            else
                static_assert(always_false<T>);
        },
        law);
}

void validate_law(const InfDivLaw& law)
{
    auto fail = [&](const std::string& what) {
        throw Error(ErrorCode::OutOfRange, law_name(law) + ": " + what);
    };
    auto positive_finite = [](double v) { return std::isfinite(v) && v > 0.0; };
    auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    std::visit(
        [&](const auto& l) {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, law::Degenerate>)
            {
                if (std::isnan(l.value) || l.value < 0.0)
                    fail("value must be in [0, inf]");
            }
            else if constexpr (std::is_same_v<T, law::Gamma>)
            {
                if (!positive_finite(l.shape) || !positive_finite(l.rate))
                    fail("shape and rate must be positive and finite");
            }
            else if constexpr (std::is_same_v<T, law::CompoundPoissonExp>)
            {
                if (!positive_finite(l.intensity) || !positive_finite(l.jump_rate))
                    fail("intensity and jump rate must be positive and finite");
            }
            else if constexpr (std::is_same_v<T, law::GeometricKilled>)
            {
                if (!(l.p >= 0.0 && l.p < 1.0) || !unit(l.finite_mass))
                    fail("need p in [0, 1) and finite mass in [0, 1]");
            }
            else if constexpr (std::is_same_v<T, law::Bernoulli>)
            {
                if (!unit(l.q) || std::isnan(l.level) || l.level < 0.0)
                    fail("need q in [0, 1] and level in [0, inf]");
            }
        },
        law);
}

bool is_infinitely_divisible(const InfDivLaw& law)
{
    if (const auto* b = std::get_if<law::Bernoulli>(&law))
        return b->q == 0.0 || b->q == 1.0 || b->level == 0.0 || std::isinf(b->level);
    return true;
}

double prob_zero(const InfDivLaw& law)
{
    return std::visit(
        [](const auto& l) -> double {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, law::Degenerate>)
                return l.value == 0.0 ? 1.0 : 0.0;
            else if constexpr (std::is_same_v<T, law::CompoundPoissonExp>)
                return std::exp(-l.intensity);
            else if constexpr (std::is_same_v<T, law::Bernoulli>)
                return l.level == 0.0 ? 1.0 : 1.0 - l.q;
            else
                return 0.0;
        },
        law);
}

double laplace_transform(const InfDivLaw& law, double k)
{
    if (k == 0.0)
        return 1.0;
    return std::visit(
        [k](const auto& l) -> double {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, law::Degenerate>)
                return std::isinf(l.value) ? 0.0 : std::exp(-k * l.value);
            else if constexpr (std::is_same_v<T, law::Gamma>)
                return std::pow(l.rate / (l.rate + k), l.shape);
            else if constexpr (std::is_same_v<T, law::CompoundPoissonExp>)
                return std::exp(-l.intensity * k / (l.jump_rate + k));
            else if constexpr (std::is_same_v<T, law::GeometricKilled>)
                return l.finite_mass * (1.0 - l.p) * std::exp(-k) / (1.0 - l.p * std::exp(-k));
            else
                return (1.0 - l.q) + (std::isinf(l.level) ? 0.0 : l.q * std::exp(-k * l.level));
        },
        law);
}

ExchangeableSeq laplace_moments(const InfDivLaw& law, int dim, Role role)
{
    if (role != Role::BSeq && role != Role::Beta)
        throw Error(ErrorCode::InvalidSequence, "laplace moments are a b or beta sequence");
    check_dim(dim);
    validate_law(law);
    std::vector<double> x(dim + 1);
    for (int k = 0; k <= dim; ++k)
        x[k] = laplace_transform(law, k);
    return make_seq(role, std::move(x));
}

std::string_view to_string(Family family)
{
    switch (family)
    {
        case Family::WideExch: return "G^{W,X}";
        case Family::NarrowExch: return "G^{N,X}";
        case Family::WideExt: return "G^{W,E}";
        case Family::NarrowExt: return "G^{N,E}";
        case Family::Degenerate: return "DEGENERATE";
        case Family::NotASurvival: return "NOT_A_SURVIVAL";
    }
    return "?";
}

FamilyReport classify_family(const ExchangeableSeq& seq, double tolerance)
{
    seq.check_shape();
    ExchangeableSeq lead = seq;
    if (seq.role != Role::BSeq && seq.role != Role::Beta)
    {
        const bool narrow = seq.role == Role::PNarrow || seq.role == Role::ASeq;
        lead = convert(seq, narrow ? Role::BSeq : Role::Beta);
    }
    FamilyReport out;
    out.report = classify_sequence(lead.values, tolerance);
    const SequenceClassReport& r = out.report;
    if (!r.in_M.member)
    {
        out.family = Family::NotASurvival;
        return out;
    }
    if (lead.values[1] == 0.0)
    {
        out.family = Family::Degenerate;
        return out;
    }
    out.wide_exch = true;
    out.narrow_exch = r.in_LM.member;
    out.wide_ext = r.hankel.extendible;
    out.narrow_ext = out.narrow_exch && out.wide_ext && r.lm_ext && r.lm_ext->extendible;
    out.narrow_ext_heuristic = !(r.lm_ext && r.lm_ext->exact);
    if (out.narrow_ext)
        out.family = Family::NarrowExt;
    else if (out.narrow_exch)
        out.family = Family::NarrowExch;
    else if (out.wide_ext)
        out.family = Family::WideExt;
    else
        out.family = Family::WideExch;
    return out;
}

}  // namespace geomlaw
