#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geomlaw/exchangeable.hpp"
#include "geomlaw/shock_models.hpp"

namespace geomlaw {

/// Component indices are zero-based; corr(n, n) is 1.
double corr_narrow(const NarrowParams& params, int n, int m);
double corr_wide(const WideParams& params, int n, int m);

/// Pairwise correlation of any exchangeable pair from a leading-1 sequence
/// (b or beta): (x_2 - x_1^2) / (x_1 (1 - x_2)).
double corr_exchangeable(const ExchangeableSeq& seq);
/// Same quantity through the a-parameterization: (a_2 - a_1) / (1 - a_1 a_2).
double corr_exchangeable_from_a(const ExchangeableSeq& a);

/// Correlation of Geo(1-p1), Geo(1-p2) margins under the countermonotone
/// (lower Frechet-Hoeffding) coupling.
double corr_frechet_lower(double p1, double p2);
/// Same under the comonotone (upper) coupling.
double corr_frechet_upper(double p1, double p2);

/// Lower coupling survival max(0, p1^n1 + p2^n2 - 1).
SurvivalFn frechet_lower_survival(double p1, double p2);
/// Upper coupling survival min_k p_k^{n_k}.
SurvivalFn frechet_upper_survival(std::vector<double> p);

struct MrtiVerdict
{
    bool mrti = true;
    /// k with x_k^2 > x_{k-1} x_{k+1}.
    std::optional<int> witness_k;
};

MrtiVerdict mrti_exchangeable(const ExchangeableSeq& seq,
                              double tolerance = tol::kMembership);

struct MrtiWitness
{
    std::vector<int> perm;
    int position = 0;
    int raised = 0;
    std::vector<Count> n;
    double before = 0;
    double after = 0;
};

struct MrtiBruteVerdict
{
    bool mrti = true;
    std::optional<MrtiWitness> witness;
};

/// Exhaustive MRTI check over every permutation and grid point n in
/// {0..grid_max}^d; d <= 4 and grid_max <= 4.
MrtiBruteVerdict mrti_bruteforce(const SurvivalFn& survival, int dim, int grid_max,
                                 double tolerance = tol::kMembership);

struct DependenceReport
{
    int dim = 0;
    std::vector<std::vector<double>> corr;
    std::optional<bool> mrti;
    std::optional<int> mrti_witness;
    std::vector<std::string> notes;
};

DependenceReport dependence_report(const NarrowParams& params);
DependenceReport dependence_report(const WideParams& params);

}  // namespace geomlaw
