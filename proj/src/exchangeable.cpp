#include "geomlaw/exchangeable.hpp"

#include <cmath>
#include <string>

#include "geomlaw/sequences.hpp"

namespace geomlaw {
namespace {

bool has_leading_one(Role role)
{
    return role == Role::BSeq || role == Role::Beta;
}

bool is_narrow_role(Role role)
{
    return role == Role::PNarrow || role == Role::ASeq || role == Role::BSeq;
}

void require_role(const ExchangeableSeq& seq, Role role)
{
    if (seq.role != role)
    {
        throw Error(ErrorCode::InvalidSequence,
                    "expected a " + std::string(to_string(role)) + " sequence, got "
                        + std::string(to_string(seq.role)));
    }
    seq.check_shape();
}

}  // namespace

std::string_view to_string(Role role)
{
    switch (role)
    {
        case Role::PNarrow: return "p";
        case Role::ASeq: return "a";
        case Role::BSeq: return "b";
        case Role::PTilde: return "ptilde";
        case Role::Beta: return "beta";
    }
    return "?";
}

Role role_from_string(std::string_view name)
{
    if (name == "p")
        return Role::PNarrow;
    if (name == "a")
        return Role::ASeq;
    if (name == "b")
        return Role::BSeq;
    if (name == "ptilde")
        return Role::PTilde;
    if (name == "beta")
        return Role::Beta;
    throw Error(ErrorCode::Parse,
                "unknown role '" + std::string(name)
                    + "' (expected p, a, b, ptilde or beta)");
}

void ExchangeableSeq::check_shape() const
{
    const std::size_t expected = static_cast<std::size_t>(dim) + (has_leading_one(role) ? 1 : 0);
    if (dim < 1 || dim > kMaxDim || values.size() != expected)
    {
        throw Error(ErrorCode::InvalidSequence,
                    std::string(to_string(role)) + " sequence of dimension "
                        + std::to_string(dim) + " needs " + std::to_string(expected)
                        + " values, got " + std::to_string(values.size()));
    }
    for (double v : values)
    {
        if (!std::isfinite(v))
            throw Error(ErrorCode::InvalidSequence, "sequence entries must be finite");
    }
    if (has_leading_one(role) && std::abs(values[0] - 1.0) > tol::kValidation)
    {
        throw Error(ErrorCode::InvalidSequence,
                    std::string(to_string(role)) + " sequence must start with 1");
    }
}

ExchangeableSeq make_seq(Role role, std::vector<double> values)
{
    ExchangeableSeq seq;
    seq.role = role;
    seq.dim = static_cast<int>(values.size()) - (has_leading_one(role) ? 1 : 0);
    seq.values = std::move(values);
    seq.check_shape();
    return seq;
}

ExchangeableSeq a_from_p(const ExchangeableSeq& p)
{
    require_role(p, Role::PNarrow);
    const int d = p.dim;
    double log_total = 0;
    for (double v : p.values)
    {
        if (!(v > 0.0 && v <= 1.0))
        {
            throw Error(ErrorCode::InvalidSequence,
                        "p entries must lie in (0, 1], got " + std::to_string(v));
        }
        log_total += std::log(v);
    }
    if (!(log_total < 0.0))
        throw Error(ErrorCode::InvalidSequence, "product of p entries must be < 1");

    std::vector<double> a(d);
    for (int k = 1; k <= d; ++k)
    {
        double log_a = 0;
        for (int i = 1; i <= d - k + 1; ++i)
            log_a += static_cast<double>(binomial(d - k, i - 1)) * std::log(p.values[i - 1]);
        a[k - 1] = std::exp(log_a);
    }
    return make_seq(Role::ASeq, std::move(a));
}

PFromA p_from_a(const ExchangeableSeq& a)
{
    require_role(a, Role::ASeq);
    const int d = a.dim;
    for (double v : a.values)
    {
        if (!(v > 0.0))
            throw Error(ErrorCode::NonpositiveEntry, "a entries must be strictly positive");
    }
    PFromA out;
    std::vector<double> p(d);
    for (int k = 1; k <= d; ++k)
    {
        double log_p = 0;
        for (int i = 1; i <= k; ++i)
        {
            const double c = static_cast<double>(binomial(k - 1, i - 1));
            const double sign = ((k - i) % 2 == 0) ? 1.0 : -1.0;
            log_p += sign * c * std::log(a.values[d - i]);
        }
        p[k - 1] = std::exp(log_p);
        if (log_p > tol::kValidation)
            out.is_narrow = false;
        else if (log_p > 0.0)
            p[k - 1] = 1.0;
    }
    out.p.role = Role::PNarrow;
    out.p.dim = d;
    out.p.values = std::move(p);
    return out;
}

ExchangeableSeq b_from_a(const ExchangeableSeq& a)
{
    require_role(a, Role::ASeq);
    std::vector<double> b{1.0};
    for (double v : a.values)
        b.push_back(b.back() * v);
    return make_seq(Role::BSeq, std::move(b));
}

ExchangeableSeq a_from_b(const ExchangeableSeq& b)
{
    require_role(b, Role::BSeq);
    std::vector<double> a;
    for (int k = 1; k <= b.dim; ++k)
    {
        if (!(b.values[k - 1] > 0.0))
            throw Error(ErrorCode::NonpositiveEntry, "b entries must be strictly positive");
        a.push_back(b.values[k] / b.values[k - 1]);
    }
    return make_seq(Role::ASeq, std::move(a));
}

ExchangeableSeq beta_from_ptilde(const ExchangeableSeq& ptilde)
{
    require_role(ptilde, Role::PTilde);
    // Validation only: throws on range, sum or degeneracy problems.
    (void)to_wide_params(ptilde);
    const int d = ptilde.dim;
    std::vector<double> beta(d + 1, 0.0);
    beta[0] = 1.0;
    for (int k = 1; k <= d; ++k)
    {
        for (int i = 1; i <= d - k + 1; ++i)
            beta[k] += static_cast<double>(binomial(d - k, i - 1)) * ptilde.values[i - 1];
    }
    return make_seq(Role::Beta, std::move(beta));
}

PTildeFromBeta ptilde_from_beta(const ExchangeableSeq& beta)
{
    require_role(beta, Role::Beta);
    const int d = beta.dim;
    PTildeFromBeta out;
    std::vector<double> pt(d);
    for (int k = 1; k <= d; ++k)
    {
        pt[k - 1] = difference(beta.values, k - 1, d - k + 1);
        if (pt[k - 1] < -tol::kValidation && !out.negative_index)
            out.negative_index = k;
        else if (pt[k - 1] < 0.0)
            pt[k - 1] = 0.0;
    }
    out.full_set = difference(beta.values, d, 0);
    if (out.full_set < -tol::kValidation && !out.negative_index)
        out.negative_index = d + 1;
    else if (out.full_set < 0.0)
        out.full_set = 0.0;
    out.is_wide = !out.negative_index && beta.values[1] < 1.0;
    out.ptilde.role = Role::PTilde;
    out.ptilde.dim = d;
    out.ptilde.values = std::move(pt);
    return out;
}

double survival_exch(const ExchangeableSeq& seq, std::span<const Count> n)
{
    seq.check_shape();
    if (!has_leading_one(seq.role))
        throw Error(ErrorCode::InvalidSequence, "survival_exch needs a b or beta sequence");
    const int d = seq.dim;
    if (n.size() != static_cast<std::size_t>(d))
        throw Error(ErrorCode::DimensionMismatch, "argument length differs from d");
    const OrderStats stats = order_stats(n);
    double log_sum = 0;
    for (int k = 1; k <= d; ++k)
    {
        const Count hi = stats.sorted[d - k];
        const Count lo = d - k >= 1 ? stats.sorted[d - k - 1] : 0;
        const Count e = hi - lo;
        if (e == 0)
            continue;
        const double x = seq.values[k];
        if (x <= 0.0)
            return 0.0;
        log_sum += static_cast<double>(e) * std::log(x);
    }
    return std::exp(log_sum);
}

double survival_exch_narrow(const ExchangeableSeq& b, std::span<const Count> n)
{
    require_role(b, Role::BSeq);
    return survival_exch(b, n);
}

double survival_exch_wide(const ExchangeableSeq& beta, std::span<const Count> n)
{
    require_role(beta, Role::Beta);
    return survival_exch(beta, n);
}

SurvivalFn survival_fn(const ExchangeableSeq& seq)
{
    const Role target = is_narrow_role(seq.role) ? Role::BSeq : Role::Beta;
    ExchangeableSeq x = seq.role == target ? seq : convert(seq, target);
    return [x = std::move(x)](std::span<const Count> n) { return survival_exch(x, n); };
}

ExchangeabilityVerdict is_exchangeable(const NarrowParams& params, double tolerance)
{
    const int d = params.dim();
    const std::uint32_t count = 1u << d;
    ExchangeabilityVerdict verdict;
    for (std::uint32_t bits = 1; bits < count; ++bits)
    {
        const std::uint32_t rep = full_mask(std::popcount(bits));
        if (std::abs(params[bits] - params[rep]) > tolerance)
            return verdict;
    }
    std::vector<double> p(d);
    for (int k = 1; k <= d; ++k)
        p[k - 1] = params[full_mask(k)];
    verdict.exchangeable = true;
    verdict.seq = make_seq(Role::PNarrow, std::move(p));
    return verdict;
}

ExchangeabilityVerdict is_exchangeable(const WideParams& params, double tolerance)
{
    const int d = params.dim();
    const std::uint32_t full = full_mask(d);
    ExchangeabilityVerdict verdict;
    for (std::uint32_t bits = 0; bits < full; ++bits)
    {
        const int size = std::popcount(bits);
        const std::uint32_t rep = size == 0 ? 0u : full_mask(size);
        if (std::abs(params[bits] - params[rep]) > tolerance)
            return verdict;
    }
    std::vector<double> pt(d);
    for (int k = 1; k <= d; ++k)
        pt[k - 1] = params[k == 1 ? 0u : full_mask(k - 1)];
    verdict.exchangeable = true;
    verdict.seq = make_seq(Role::PTilde, std::move(pt));
    return verdict;
}

NarrowParams to_narrow_params(const ExchangeableSeq& p)
{
    require_role(p, Role::PNarrow);
    RawParamMap raw;
    const std::uint32_t count = 1u << p.dim;
    for (std::uint32_t bits = 1; bits < count; ++bits)
        raw[bits] = p.values[std::popcount(bits) - 1];
    return validate_narrow(raw, p.dim);
}

WideParams to_wide_params(const ExchangeableSeq& ptilde)
{
    require_role(ptilde, Role::PTilde);
    const int d = ptilde.dim;
    const std::uint32_t full = full_mask(d);
    double full_value = 1.0;
    for (int i = 1; i <= d; ++i)
        full_value -= static_cast<double>(binomial(d, i - 1)) * ptilde.values[i - 1];
    if (full_value < 0.0 && full_value > -tol::kValidation)
        full_value = 0.0;
    RawParamMap raw;
    for (std::uint32_t bits = 0; bits < full; ++bits)
        raw[bits] = ptilde.values[std::popcount(bits)];
    raw[full] = full_value;
    return validate_wide(raw, d);
}

ExchangeableSeq convert(const ExchangeableSeq& seq, Role target)
{
    seq.check_shape();
    if (seq.role == target)
        return seq;

    // Reduce to the leading-1 sequence (b or beta); both describe the same
    // survival function, so they coincide for a narrow-sense law.
    std::vector<double> x;
    switch (seq.role)
    {
        case Role::PNarrow: x = b_from_a(a_from_p(seq)).values; break;
        case Role::ASeq: x = b_from_a(seq).values; break;
        case Role::BSeq: x = seq.values; break;
        case Role::PTilde: x = beta_from_ptilde(seq).values; break;
        case Role::Beta: x = seq.values; break;
    }

    if (!is_narrow_role(seq.role) && is_narrow_role(target))
    {
        for (double v : x)
        {
            if (!(v > 0.0))
            {
                throw Error(ErrorCode::NotRepresentable,
                            "wide-to-narrow conversion refused: beta has a zero entry, "
                            "so it is not log-monotone and no narrow-sense law matches");
            }
        }
        const Verdict lm = check_LM(x);
        if (!lm.member)
        {
            std::string where;
            if (lm.witness)
            {
                where = " (difference of order " + std::to_string(lm.witness->order)
                        + " of ln beta at k=" + std::to_string(lm.witness->offset)
                        + " is " + std::to_string(lm.witness->value) + ")";
            }
            throw Error(ErrorCode::NotRepresentable,
                        "wide-to-narrow conversion refused: beta is not d-log-monotone"
                            + where
                            + "; an exchangeable wide-sense law is narrow-sense only if "
                              "beta lies in LM_{d+1}");
        }
    }

    const Role lead = is_narrow_role(target) ? Role::BSeq : Role::Beta;
    ExchangeableSeq lead_seq = make_seq(lead, std::move(x));
    switch (target)
    {
        case Role::BSeq:
        case Role::Beta: return lead_seq;
        case Role::ASeq: return a_from_b(lead_seq);
        case Role::PNarrow:
        {
            PFromA p = p_from_a(a_from_b(lead_seq));
            if (!p.is_narrow)
            {
                throw Error(ErrorCode::NotRepresentable,
                            "conversion refused: implied p has an entry above 1, "
                            "the a-sequence is not in SM_d");
            }
            return p.p;
        }
        case Role::PTilde:
        {
            PTildeFromBeta pt = ptilde_from_beta(lead_seq);
            if (!pt.is_wide)
            {
                throw Error(ErrorCode::NotRepresentable,
                            "conversion refused: beta is not d+1-monotone, p~ would have "
                            "a negative entry");
            }
            return pt.ptilde;
        }
    }
    return lead_seq;
}

}  // namespace geomlaw
