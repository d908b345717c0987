#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "geomlaw/shock_models.hpp"

namespace geomlaw {

/// Which exchangeable parameterization a sequence holds.
///   PNarrow  p_k = p_{1..k},          length d
///   ASeq     a_k,                     length d
///   BSeq     (1, b_1, ..., b_d),      length d+1
///   PTilde   p~_k = p~_{1..k-1},      length d
///   Beta     (1, beta_1, ..., beta_d), length d+1
enum class Role { PNarrow, ASeq, BSeq, PTilde, Beta };

std::string_view to_string(Role role);
/// Accepts "p", "a", "b", "ptilde", "beta".
Role role_from_string(std::string_view name);

struct ExchangeableSeq
{
    Role role = Role::PNarrow;
    int dim = 0;
    std::vector<double> values;

    /// Throws InvalidSequence when the length or the leading 1 does not
    /// match the role.
    void check_shape() const;
};

ExchangeableSeq make_seq(Role role, std::vector<double> values);

ExchangeableSeq a_from_p(const ExchangeableSeq& p);

struct PFromA
{
    ExchangeableSeq p;
    /// False when some p_k falls outside (0, 1]: the a-sequence is not in
    /// SM_d and describes no narrow-sense law.
    bool is_narrow = true;
};

PFromA p_from_a(const ExchangeableSeq& a);

ExchangeableSeq b_from_a(const ExchangeableSeq& a);
ExchangeableSeq a_from_b(const ExchangeableSeq& b);

ExchangeableSeq beta_from_ptilde(const ExchangeableSeq& ptilde);

struct PTildeFromBeta
{
    ExchangeableSeq ptilde;
    /// p~ of the full set {1..d}, determined by normalization.
    double full_set = 0;
    bool is_wide = true;
    /// Index k (1-based) of the first negative p~_k; d+1 for the full set.
    std::optional<int> negative_index;
};

PTildeFromBeta ptilde_from_beta(const ExchangeableSeq& beta);

/// Order-statistic product prod_k x_k^{n_(d-k+1) - n_(d-k)} for a
/// leading-1 sequence (B or Beta).
double survival_exch(const ExchangeableSeq& seq, std::span<const Count> n);
double survival_exch_narrow(const ExchangeableSeq& b, std::span<const Count> n);
double survival_exch_wide(const ExchangeableSeq& beta, std::span<const Count> n);
SurvivalFn survival_fn(const ExchangeableSeq& seq);

struct ExchangeabilityVerdict
{
    bool exchangeable = false;
    /// PNarrow or PTilde sequence when exchangeable.
    std::optional<ExchangeableSeq> seq;
};

ExchangeabilityVerdict is_exchangeable(const NarrowParams& params,
                                       double tolerance = tol::kExchangeable);
ExchangeabilityVerdict is_exchangeable(const WideParams& params,
                                       double tolerance = tol::kExchangeable);

/// Embeds p_k as p_I := p_{|I|}.
NarrowParams to_narrow_params(const ExchangeableSeq& p);
/// Embeds p~_k as p~_I := p~_{|I|+1}; the full set gets the remainder.
WideParams to_wide_params(const ExchangeableSeq& ptilde);

/// Converts between any two roles of the same sense; crosses from wide to
/// narrow only when beta is d-log-monotone. Throws NotRepresentable otherwise.
ExchangeableSeq convert(const ExchangeableSeq& seq, Role target);

}  // namespace geomlaw
