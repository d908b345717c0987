#include "geomlaw/sequences.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "geomlaw/subset_algebra.hpp"

namespace geomlaw {
namespace {

void require_length(std::span<const double> x, std::size_t minimum)
{
    if (x.size() < minimum)
    {
        throw Error(ErrorCode::TooShort,
                    "sequence needs at least " + std::to_string(minimum) + " entries, got "
                        + std::to_string(x.size()));
    }
}

void require_positive(std::span<const double> x)
{
    for (std::size_t k = 0; k < x.size(); ++k)
    {
        if (!(x[k] > 0.0))
        {
            throw Error(ErrorCode::NonpositiveEntry,
                        "entry " + std::to_string(k) + " is not strictly positive");
        }
    }
}

Verdict boundary(int offset, double value)
{
    Verdict v;
    v.member = false;
    v.boundary_failure = true;
    v.witness = Witness{offset, 0, value};
    return v;
}

/// Top-order differences grad^{len-1-k} y_k >= -tol for k = first..len-1-skip_last.
Verdict top_differences(std::span<const double> y, double tolerance, bool skip_last)
{
    const int len = static_cast<int>(y.size());
    const int last = skip_last ? len - 2 : len - 1;
    for (int k = 0; k <= last; ++k)
    {
        const int order = len - 1 - k;
        const double value = difference(y, order, k);
        if (value < -tolerance)
        {
            Verdict v;
            v.member = false;
            v.witness = Witness{k, order, value};
            return v;
        }
    }
    return {};
}

std::vector<double> logs(std::span<const double> x, double sign)
{
    std::vector<double> out(x.size());
    for (std::size_t k = 0; k < x.size(); ++k)
        out[k] = sign * std::log(x[k]);
    return out;
}

double min_eigenvalue(const Eigen::MatrixXd& h)
{
    if (h.size() == 0)
        return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

}  // namespace

Verdict check_M(std::span<const double> x, double tolerance)
{
    require_length(x, 2);
    if (std::abs(x[0] - 1.0) > tolerance)
        return boundary(0, x[0]);
    if (!(x[1] < 1.0))
        return boundary(1, x[1]);
    return top_differences(x, tolerance, false);
}

Verdict check_LM(std::span<const double> x, double tolerance)
{
    require_length(x, 2);
    require_positive(x);
    if (std::abs(x[0] - 1.0) > tolerance)
        return boundary(0, x[0]);
    if (!(x[1] < 1.0))
        return boundary(1, x[1]);
    const std::vector<double> y = logs(x, 1.0);
    return top_differences(y, tolerance, true);
}

Verdict check_SM(std::span<const double> x, double tolerance)
{
    require_length(x, 1);
    require_positive(x);
    if (!(x[0] < 1.0))
        return boundary(0, x[0]);
    const std::vector<double> y = logs(x, -1.0);
    return top_differences(y, tolerance, false);
}

HankelVerdict hankel_extendible(std::span<const double> x, double eigen_tolerance)
{
    require_length(x, 2);
    if (std::abs(x[0] - 1.0) > tol::kValidation)
        throw Error(ErrorCode::InvalidSequence, "moment sequence must start with 1");
    const int m = static_cast<int>(x.size()) - 1;
    const int n = m / 2;
    Eigen::MatrixXd moments, differences;
    if (m % 2 == 0)
    {
        moments.resize(n + 1, n + 1);
        differences.resize(n, n);
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j)
                moments(i, j) = x[i + j];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                differences(i, j) = x[i + j + 1] - x[i + j + 2];
    }
    else
    {
        moments.resize(n + 1, n + 1);
        differences.resize(n + 1, n + 1);
        for (int i = 0; i <= n; ++i)
        {
            for (int j = 0; j <= n; ++j)
            {
                moments(i, j) = x[i + j + 1];
                differences(i, j) = x[i + j] - x[i + j + 1];
            }
        }
    }
    HankelVerdict v;
    v.min_eigenvalue_moments = min_eigenvalue(moments);
    v.min_eigenvalue_differences = min_eigenvalue(differences);
    v.extendible = v.min_eigenvalue_moments >= -eigen_tolerance
                   && v.min_eigenvalue_differences >= -eigen_tolerance;
    return v;
}

std::vector<double> lm_power_grid()
{
    std::vector<double> grid;
    for (int e = -6; e <= 6; ++e)
        grid.push_back(std::ldexp(1.0, e));
    return grid;
}

LmExtendibleVerdict lm_extendible(std::span<const double> b, double eigen_tolerance)
{
    require_length(b, 2);
    require_positive(b);
    LmExtendibleVerdict v;
    v.exact = b.size() == 3;
    std::vector<double> grid = lm_power_grid();
    // r = 1 first so the plain moment failure is the one reported.
    std::stable_partition(grid.begin(), grid.end(), [](double r) { return r == 1.0; });
    std::vector<double> powered(b.size());
    for (double r : grid)
    {
        for (std::size_t k = 0; k < b.size(); ++k)
            powered[k] = std::pow(b[k], r);
        if (!hankel_extendible(powered, eigen_tolerance).extendible)
        {
            v.extendible = false;
            v.failing_power = r;
            return v;
        }
    }
    return v;
}

SequenceClassReport classify_sequence(std::span<const double> x, double tolerance)
{
    require_length(x, 2);
    SequenceClassReport report;
    report.checked.assign(x.begin(), x.end());
    report.in_M = check_M(x, tolerance);

    bool positive = true;
    for (double v : x)
        positive = positive && v > 0.0;
    if (positive)
    {
        report.in_LM = check_LM(x, tolerance);
        report.in_SM = check_SM(x, tolerance);
        if (std::abs(x[0] - 1.0) <= tol::kValidation)
            report.lm_ext = lm_extendible(x);
    }
    else
    {
        report.in_LM.member = false;
        report.in_LM.boundary_failure = true;
        report.in_SM.member = false;
        report.in_SM.boundary_failure = true;
    }

    if (std::abs(x[0] - 1.0) <= tol::kValidation)
    {
        report.hankel = hankel_extendible(x);
    }
    else
    {
        report.hankel.extendible = false;
    }
    assert(!report.in_LM.member || report.in_M.member);
    return report;
}

}  // namespace geomlaw
