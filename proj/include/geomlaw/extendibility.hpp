#pragma once

#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "geomlaw/exchangeable.hpp"
#include "geomlaw/sequences.hpp"

namespace geomlaw {

/// Feasible values of the free parameter q of a one-dimension extension.
struct ExtensionInterval
{
    double lower = 0;
    double upper = 0;
    bool open_lower = false;
    bool open_upper = false;

    bool empty() const
    {
        return lower > upper || (lower == upper && (open_lower || open_upper));
    }
    bool contains(double q) const
    {
        if (empty())
            return false;
        const bool above = open_lower ? q > lower : q >= lower;
        const bool below = open_upper ? q < upper : q <= upper;
        return above && below;
    }
};

/// Interval of q = p_{d+1,d+1} (the new joint-shock parameter) for which the
/// narrow p-row extends to a valid (d+1)-row.
ExtensionInterval extend_one_narrow(const ExchangeableSeq& p_row);
/// Same for a wide p~-row; q = p~_{d+1,d+1} ranges over [0, 1].
ExtensionInterval extend_one_wide(const ExchangeableSeq& ptilde_row);

/// The (d+1)-row determined by q. Narrow rows satisfy
/// p_{k,d} = p_{k,d+1} p_{k+1,d+1}; wide rows p_{k,d} = p_{k,d+1} + p_{k+1,d+1}.
/// No range checks: the caller decides feasibility.
std::vector<double> extension_row_narrow(const ExchangeableSeq& p_row, double q);
std::vector<double> extension_row_wide(const ExchangeableSeq& ptilde_row, double q);

/// Laws on [0, inf] used as random-walk increments.
namespace law {
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Point mass at `value` (may be +inf).
struct Degenerate
{
    double value = 0;
};
struct Gamma
{
    double shape = 1;
    double rate = 1;
};
/// Poisson(intensity) many Exp(jump_rate) jumps.
struct CompoundPoissonExp
{
    double intensity = 1;
    double jump_rate = 1;
};
/// Geo(1-p) on {1,2,...} with probability finite_mass, +inf otherwise.
struct GeometricKilled
{
    double p = 0.5;
    double finite_mass = 1;
};
/// `level` with probability q, 0 otherwise. Infinitely divisible only in
/// the trivial cases q in {0, 1} and level in {0, inf}.
struct Bernoulli
{
    double q = 0.5;
    double level = 1;
};
}  // namespace law

using InfDivLaw = std::variant<law::Degenerate,
                               law::Gamma,
                               law::CompoundPoissonExp,
                               law::GeometricKilled,
                               law::Bernoulli>;

std::string law_name(const InfDivLaw& law);
/// Throws OutOfRange for parameters outside their natural ranges.
void validate_law(const InfDivLaw& law);
bool is_infinitely_divisible(const InfDivLaw& law);
double prob_zero(const InfDivLaw& law);
/// E[exp(-k X)] with the convention exp(-inf) = 0.
double laplace_transform(const InfDivLaw& law, double k);

/// (1, E[e^{-X}], ..., E[e^{-dX}]) tagged BSeq or Beta.
ExchangeableSeq laplace_moments(const InfDivLaw& law, int dim, Role role = Role::Beta);

enum class Family { WideExch, NarrowExch, WideExt, NarrowExt, Degenerate, NotASurvival };

std::string_view to_string(Family family);

struct FamilyReport
{
    /// Most specific class: NarrowExt, then NarrowExch, then WideExt, then
    /// WideExch.
    Family family = Family::NotASurvival;
    bool wide_exch = false;
    bool narrow_exch = false;
    bool wide_ext = false;
    bool narrow_ext = false;
    /// The narrow-extendible verdict is a necessary battery unless d = 2.
    bool narrow_ext_heuristic = true;
    SequenceClassReport report;
};

FamilyReport classify_family(const ExchangeableSeq& seq,
                             double tolerance = tol::kMembership);

}  // namespace geomlaw
