#include <gtest/gtest.h>

#include <cmath>

#include "geomlaw/dependence.hpp"
#include "geomlaw/verify.hpp"
#include "test_helpers.hpp"

using namespace geomlaw;
using geomlaw::testing::narrow2;
using geomlaw::testing::series_corr;

TEST(Dependence, NarrowClosedFormVsSeries)
{
    RngStream rng(51);
    for (int t = 0; t < 30; ++t)
    {
        const int d = 2 + t % 3;
        const NarrowParams p = random_narrow(d, rng);
        const SurvivalFn f = survival_fn(p);
        for (int n = 0; n < d; ++n)
            for (int m = n + 1; m < d; ++m)
            {
                const double c = corr_narrow(p, n, m);
                EXPECT_GE(c, -1e-15);
                EXPECT_NEAR(c, series_corr(f, d, n, m, 400), 1e-9);
            }
    }
}

TEST(Dependence, WideClosedFormVsSeries)
{
    RngStream rng(52);
    for (int t = 0; t < 30; ++t)
    {
        const int d = 2 + t % 3;
        const WideParams w = random_wide(d, rng);
        const SurvivalFn f = survival_fn(w);
        for (int n = 0; n < d; ++n)
            for (int m = n + 1; m < d; ++m)
                EXPECT_NEAR(corr_wide(w, n, m), series_corr(f, d, n, m, 600), 1e-8);
    }
}

TEST(Dependence, NarrowExamples)
{
    EXPECT_NEAR(corr_narrow(narrow2(0.5, 0.7, 1.0), 0, 1), 0.0, 1e-15);
    EXPECT_NEAR(corr_narrow(narrow2(1.0, 1.0, 0.4), 0, 1), 1.0, 1e-15);
    EXPECT_EQ(corr_narrow(narrow2(0.5, 0.7, 0.9), 1, 1), 1.0);
    EXPECT_THROW(corr_narrow(narrow2(0.5, 0.7, 0.9), 0, 2), Error);
}

TEST(Dependence, ExchangeableForms)
{
    RngStream rng(53);
    for (int t = 0; t < 100; ++t)
    {
        std::vector<double> p{0.2 + 0.7 * rng.uniform(), 0.2 + 0.8 * rng.uniform(), 0.5 + 0.5 * rng.uniform()};
        const ExchangeableSeq ps = make_seq(Role::PNarrow, p);
        const ExchangeableSeq a = a_from_p(ps);
        const double via_a = corr_exchangeable_from_a(a);
        EXPECT_NEAR(via_a, corr_exchangeable(b_from_a(a)), 1e-12);
        EXPECT_NEAR(via_a, corr_narrow(to_narrow_params(ps), 0, 2), 1e-12);
    }
    EXPECT_NEAR(corr_exchangeable(make_seq(Role::Beta, {1, 0.5, 0.2})), -0.125, 1e-15);
    for (int d = 2; d <= 6; ++d)
    {
        std::vector<double> beta(d + 1, 0.0);
        beta[0] = 1;
        beta[1] = 1.0 / d;
        EXPECT_NEAR(corr_exchangeable(make_seq(Role::Beta, beta)), -1.0 / d, 1e-12);
    }
}

TEST(Dependence, WideLowerBound)
{
    for (int d = 2; d <= 6; ++d)
    {
        // p~_I = 2^{1-d} on the sets containing component 1 xor component 2.
        RawParamMap raw;
        for (std::uint32_t b = 0; b < (1u << d); ++b)
            raw[b] = ((b & 1u) != 0) != ((b & 2u) != 0) ? std::ldexp(1.0, 1 - d) : 0.0;
        const WideParams w = validate_wide(raw, d);
        EXPECT_NEAR(corr_wide(w, 0, 1), -0.5, 1e-12) << d;
    }
}

TEST(Dependence, FrechetLower)
{
    EXPECT_NEAR(corr_frechet_lower(0.4, 0.4), -0.4, 1e-15);
    EXPECT_NEAR(corr_frechet_lower(0.3, 0.6), -std::sqrt(0.18), 1e-15);
    for (double p1 : {0.55, 0.7, 0.9})
        for (double p2 : {0.3, 0.6, 0.8})
        {
            const double series = series_corr(frechet_lower_survival(p1, p2), 2, 0, 1, 3000);
            EXPECT_NEAR(corr_frechet_lower(p1, p2), series, 1e-9) << p1 << " " << p2;
        }
    EXPECT_THROW(corr_frechet_lower(1.0, 0.5), Error);
}

TEST(Dependence, FrechetUpper)
{
    for (double p : {0.1, 0.5, 0.9, 0.99})
        EXPECT_NEAR(corr_frechet_upper(p, p), 1.0, 1e-12) << p;
    for (double p1 : {0.3, 0.6})
        for (double p2 : {0.5, 0.8})
        {
            const double series =
                series_corr(frechet_upper_survival({p1, p2}), 2, 0, 1, 3000);
            const double c = corr_frechet_upper(p1, p2);
            EXPECT_NEAR(c, series, 1e-9);
            EXPECT_LT(c, 1.0);
        }
}

TEST(Dependence, MrtiExamples)
{
    const double p = 0.4;
    EXPECT_TRUE(mrti_exchangeable(make_seq(Role::Beta, {1, p, p * p, p * p * p})).mrti);
    const MrtiVerdict bad = mrti_exchangeable(make_seq(Role::Beta, {1, 0.5, 0.2}));
    EXPECT_FALSE(bad.mrti);
    EXPECT_EQ(bad.witness_k, 1);
    EXPECT_THROW(mrti_exchangeable(make_seq(Role::Beta, {1, 0.9, 0.95})), Error);

    const MrtiBruteVerdict brute = mrti_bruteforce(survival_fn(make_seq(Role::Beta, {1, 0.5, 0.2})), 2, 3);
    EXPECT_FALSE(brute.mrti);
    ASSERT_TRUE(brute.witness);
    EXPECT_LT(brute.witness->after, brute.witness->before);

    EXPECT_TRUE(mrti_bruteforce(frechet_upper_survival({0.6, 0.6, 0.6}), 3, 3).mrti);
    EXPECT_THROW(mrti_bruteforce(frechet_upper_survival({0.6, 0.6}), 5, 3), Error);
}

TEST(Dependence, MrtiAgreement)
{
    RngStream rng(54);
    int negatives = 0;
    for (int t = 0; t < 60; ++t)
    {
        const ExchangeableSeq beta = t % 2 ? random_simplex_beta(3, rng) : random_moment_beta(3, rng);
        const bool closed = mrti_exchangeable(beta).mrti;
        negatives += !closed;
        EXPECT_EQ(closed, mrti_bruteforce(survival_fn(beta), 3, 3).mrti) << t;
    }
    EXPECT_GT(negatives, 0);
}

TEST(Dependence, Reports)
{
    const DependenceReport r = dependence_report(narrow2(0.5, 0.6, 0.9));
    ASSERT_EQ(r.corr.size(), 2u);
    EXPECT_EQ(r.corr[0][0], 1.0);
    EXPECT_EQ(r.corr[0][1], r.corr[1][0]);
    EXPECT_TRUE(r.mrti.value_or(false));

    const WideParams w = to_wide_params(ptilde_from_beta(make_seq(Role::Beta, {1, 0.5, 0.2})).ptilde);
    const DependenceReport rw = dependence_report(w);
    EXPECT_FALSE(rw.mrti.value_or(true));
    EXPECT_EQ(rw.mrti_witness, 1);
    EXPECT_NEAR(rw.corr[0][1], -0.125, 1e-12);
}
