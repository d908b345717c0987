#include <gtest/gtest.h>

#include <cmath>

#include "geomlaw/dependence.hpp"
#include "geomlaw/shock_models.hpp"
#include "geomlaw/verify.hpp"
#include "test_helpers.hpp"

using namespace geomlaw;
using geomlaw::testing::narrow2;
using geomlaw::testing::wide2;

namespace {

ErrorCode code_of(auto&& f)
{
    try
    {
        f();
    }
    catch (const Error& e)
    {
        return e.code();
    }
    ADD_FAILURE() << "no exception";
    return ErrorCode::Parse;
}

}  // namespace

TEST(ShockModels, NarrowValidationErrors)
{
    EXPECT_EQ(code_of([] { validate_narrow({{1, 0.5}, {2, 0.5}}, 2); }), ErrorCode::MissingKey);
    EXPECT_EQ(code_of([] { validate_narrow({{1, 0.5}, {2, 1.5}, {3, 1}}, 2); }),
              ErrorCode::RangeViolation);
    EXPECT_EQ(code_of([] { validate_narrow({{1, 0.5}, {2, 1.0}, {3, 1.0}}, 2); }),
              ErrorCode::DegenerateComponent);
    EXPECT_EQ(code_of([] { validate_narrow({{1, 0.5}, {2, 0.5}, {3, 1.0}, {4, 0.5}}, 2); }),
              ErrorCode::RangeViolation);
}

TEST(ShockModels, WideValidationErrors)
{
    EXPECT_EQ(code_of([] { validate_wide({{0, 0.5}, {1, 0.2}, {2, 0.2}, {3, 0.2}}, 2); }),
              ErrorCode::SumNotOne);
    EXPECT_EQ(code_of([] { validate_wide({{0, 0.5}, {1, 0.5}, {2, 0.0}, {3, 0.0}}, 2); }),
              ErrorCode::DegenerateComponent);
    EXPECT_EQ(code_of([] { validate_wide({{0, 1.0}, {1, 0.0}, {2, 0.0}}, 2); }),
              ErrorCode::MissingKey);
}

TEST(ShockModels, NarrowSurvivalHandValue)
{
    const NarrowParams p = narrow2(0.5, 0.6, 0.9);
    const std::vector<Count> n{1, 2};
    EXPECT_NEAR(survival_narrow(p, n), 0.5 * 0.36 * 0.81, 1e-15);
    const std::vector<Count> zero{0, 0};
    EXPECT_EQ(survival_narrow(p, zero), 1.0);
}

TEST(ShockModels, ZeroParameterShock)
{
    const NarrowParams p = narrow2(0.0, 0.5, 1.0);
    const std::vector<Count> n{0, 3};
    EXPECT_NEAR(survival_narrow(p, n), 0.125, 1e-15);
    const std::vector<Count> m{1, 0};
    EXPECT_EQ(survival_narrow(p, m), 0.0);
}

TEST(ShockModels, WideFromNarrowHandValues)
{
    const WideParams w = wide_from_narrow(narrow2(0.5, 0.6, 0.9));
    EXPECT_NEAR(w[0], 0.27, 1e-15);
    EXPECT_NEAR(w[1], 0.27, 1e-15);
    EXPECT_NEAR(w[2], 0.18, 1e-15);
    EXPECT_NEAR(w[3], 0.28, 1e-15);
}

TEST(ShockModels, WideSurvivalMatchesNarrowAfterConversion)
{
    RngStream rng(7);
    for (int t = 0; t < 30; ++t)
    {
        const int d = 2 + t % 3;
        const NarrowParams n = random_narrow(d, rng);
        const WideParams w = wide_from_narrow(n);
        const GridComparison c = compare_grids(analytic_grid(survival_fn(n), d, 3),
                                               analytic_grid(survival_fn(w), d, 3), 1e-12);
        EXPECT_TRUE(c.pass) << c.max_abs_deviation;
    }
}

TEST(ShockModels, WidePermutationTiesDoNotMatter)
{
    const WideParams w = wide2(0.25, 0.25, 0.25, 0.25);
    const std::vector<Count> n{2, 2};
    const std::vector<int> a{0, 1}, b{1, 0};
    EXPECT_DOUBLE_EQ(survival_wide_with_permutation(w, n, a),
                     survival_wide_with_permutation(w, n, b));
    const std::vector<Count> m{1, 3};
    EXPECT_THROW(survival_wide_with_permutation(w, m, b), Error);
}

TEST(ShockModels, PmfIsAProbability)
{
    RngStream rng(11);
    const NarrowParams n = random_narrow(2, rng);
    const SurvivalFn f = survival_fn(n);
    double total = 0;
    for (Count i = 1; i <= 200; ++i)
    {
        for (Count j = 1; j <= 200; ++j)
        {
            const std::vector<Count> at{i, j};
            const PmfValue v = pmf(f, at);
            EXPECT_FALSE(v.violation);
            total += v.value;
        }
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(ShockModels, PmfRejectsZeroArgument)
{
    const SurvivalFn f = survival_fn(narrow2(0.5, 0.5, 0.5));
    const std::vector<Count> at{0, 1};
    EXPECT_THROW(pmf(f, at), Error);
}

TEST(ShockModels, NarrowFromWideRoundTrip)
{
    RngStream rng(3);
    for (int t = 0; t < 50; ++t)
    {
        const NarrowParams n = random_narrow(2, rng);
        const NarrowParams back = narrow_from_wide_2d(wide_from_narrow(n));
        for (std::uint32_t b = 1; b < 4; ++b)
            EXPECT_NEAR(back[b], n[b], 1e-12);
    }
}

TEST(ShockModels, NarrowFromWideRefusesNegativeCorrelation)
{
    EXPECT_EQ(code_of([] { narrow_from_wide_2d(wide2(0.1, 0.4, 0.4, 0.1)); }),
              ErrorCode::NotRepresentable);
    EXPECT_EQ(code_of([] { narrow_from_wide_2d(wide2(0.0, 0.5, 0.5, 0.0)); }),
              ErrorCode::NotRepresentable);
}

TEST(ShockModels, MarginalsAgreeWithZeroedArguments)
{
    RngStream rng(5);
    for (int t = 0; t < 20; ++t)
    {
        const NarrowParams n = random_narrow(4, rng);
        const WideParams w = random_wide(4, rng);
        const SubsetMask keep{0b1011, 4};
        const NarrowParams mn = marginal_params(n, keep);
        const WideParams mw = marginal_params(w, keep);
        for (Count a = 0; a < 3; ++a)
        {
            for (Count b = 0; b < 3; ++b)
            {
                for (Count c = 0; c < 3; ++c)
                {
                    const std::vector<Count> full{a, b, 0, c};
                    const std::vector<Count> sub{a, b, c};
                    EXPECT_NEAR(survival_narrow(mn, sub), survival_narrow(n, full), 1e-13);
                    EXPECT_NEAR(survival_wide(mw, sub), survival_wide(w, full), 1e-13);
                }
            }
        }
    }
    EXPECT_THROW(marginal_params(random_narrow(3, rng), SubsetMask{0, 3}), Error);
}

TEST(ShockModels, LmPropertyHoldsForBothFamilies)
{
    RngStream rng(21);
    for (int t = 0; t < 10; ++t)
    {
        const int d = 2 + t % 3;
        EXPECT_TRUE(check_lm_property(survival_fn(random_narrow(d, rng)), d, 2000, 15, rng).holds);
        EXPECT_TRUE(check_lm_property(survival_fn(random_wide(d, rng)), d, 2000, 15, rng).holds);
    }
}

// The countermonotone coupling of two Geo margins is itself wide-sense when
// p1 + p2 <= 1 and loses the property once p1 + p2 > 1.
TEST(ShockModels, LowerFrechetCouplingLmProperty)
{
    RngStream rng(1);
    const LmVerdict half = check_lm_property(frechet_lower_survival(0.5, 0.5), 2, 5000, 10, rng);
    EXPECT_TRUE(half.holds);
    const LmVerdict high = check_lm_property(frechet_lower_survival(0.7, 0.7), 2, 5000, 10, rng);
    EXPECT_FALSE(high.holds);
    ASSERT_TRUE(high.witness.has_value());
    EXPECT_NE(high.witness->lhs, high.witness->rhs);

    const WideParams w = wide2(0.0, 0.5, 0.5, 0.0);
    const SurvivalFn lower = frechet_lower_survival(0.5, 0.5);
    for (Count i = 0; i < 5; ++i)
        for (Count j = 0; j < 5; ++j)
        {
            const std::vector<Count> at{i, j};
            EXPECT_NEAR(survival_wide(w, at), lower(at), 1e-15);
        }
}

TEST(ShockModels, DimensionMismatch)
{
    const NarrowParams p = narrow2(0.5, 0.5, 0.5);
    const std::vector<Count> n{1, 2, 3};
    EXPECT_THROW(survival_narrow(p, n), Error);
}
