#include <gtest/gtest.h>

#include <cmath>

#include "geomlaw/extendibility.hpp"
#include "geomlaw/sequences.hpp"
#include "geomlaw/verify.hpp"

using namespace geomlaw;

TEST(Sequences, CheckMExamples)
{
    EXPECT_TRUE(check_M(std::vector<double>{1, 0.5, 0.2}).member);
    const Verdict v = check_M(std::vector<double>{1, 0.9, 0.95});
    EXPECT_FALSE(v.member);
    ASSERT_TRUE(v.witness);
    EXPECT_EQ(v.witness->offset, 1);
    EXPECT_EQ(v.witness->order, 1);
    EXPECT_NEAR(v.witness->value, -0.05, 1e-15);
    const double p = 0.6;
    EXPECT_TRUE(check_M(std::vector<double>{1, p, p * p, p * p * p, p * p * p * p}).member);
    EXPECT_TRUE(check_M(std::vector<double>{1, 0.5, 0.2}).member);
    EXPECT_TRUE(check_M(std::vector<double>{1, 1.0, 1.0}).boundary_failure);
    EXPECT_THROW(check_M(std::vector<double>{1}), Error);
}

TEST(Sequences, CheckLMExamples)
{
    const double p = 0.4;
    EXPECT_TRUE(check_LM(std::vector<double>{1, p, p * p, p * p * p}).member);
    EXPECT_TRUE(check_LM(std::vector<double>{1, p, p, p}).member);
    std::vector<double> beta;
    for (int k = 0; k <= 3; ++k)
        beta.push_back(0.1 + 0.9 * std::exp(-k));
    const Verdict v = check_LM(beta);
    EXPECT_FALSE(v.member);
    ASSERT_TRUE(v.witness);
    EXPECT_EQ(v.witness->offset, 0);
    EXPECT_EQ(v.witness->order, 3);
    EXPECT_NEAR(v.witness->value, -0.06, 5e-3);
    EXPECT_THROW(check_LM(std::vector<double>{1, 0.5, 0.0}), Error);
}

TEST(Sequences, CheckSMExamples)
{
    const Verdict bad = check_SM(std::vector<double>{0.5, 0.4});
    EXPECT_FALSE(bad.member);
    ASSERT_TRUE(bad.witness);
    EXPECT_NEAR(bad.witness->value, std::log(0.8), 1e-12);
    EXPECT_TRUE(check_SM(std::vector<double>{0.4, 0.5}).member);
    EXPECT_TRUE(check_SM(std::vector<double>{0.7, 0.7, 0.7, 0.7}).member);
    EXPECT_FALSE(check_SM(std::vector<double>{1.0, 0.7}).member);
}

TEST(Sequences, HankelExamples)
{
    EXPECT_FALSE(hankel_extendible(std::vector<double>{1, 0.5, 0.2}).extendible);
    EXPECT_TRUE(hankel_extendible(std::vector<double>{1, 0.5, 0.25}).extendible);
    for (double x1 : {0.0, 0.1, 0.5, 0.999})
        EXPECT_TRUE(hankel_extendible(std::vector<double>{1, x1}).extendible);
    EXPECT_THROW(hankel_extendible(std::vector<double>{0.5, 0.2}), Error);
}

TEST(Sequences, DiscreteMeasureMomentsAreExtendible)
{
    // Oracle: moments of an explicit discrete measure on [0, 1].
    RngStream rng(31);
    for (int t = 0; t < 300; ++t)
    {
        const int m = 2 + t % 9;
        const int atoms = 1 + t % 4;
        std::vector<double> loc(atoms), w(atoms);
        double total = 0;
        for (int i = 0; i < atoms; ++i)
        {
            loc[i] = rng.uniform();
            w[i] = rng.uniform_open();
            total += w[i];
        }
        std::vector<double> x(m + 1, 0.0);
        for (int k = 0; k <= m; ++k)
            for (int i = 0; i < atoms; ++i)
                x[k] += w[i] / total * std::pow(loc[i], k);
        x[0] = 1.0;
        EXPECT_TRUE(hankel_extendible(x).extendible) << t;
        if (x[1] < 1.0)
        {
            EXPECT_TRUE(check_M(x).member) << t;
        }
    }
}

TEST(Sequences, HankelImpliesM)
{
    RngStream rng(32);
    int extendible = 0;
    for (int t = 0; t < 2000; ++t)
    {
        std::vector<double> x{1.0};
        for (int k = 1; k <= 4; ++k)
            x.push_back(x.back() * rng.uniform());
        if (hankel_extendible(x).extendible)
        {
            ++extendible;
            EXPECT_TRUE(check_M(x, 1e-9).member);
        }
    }
    EXPECT_GT(extendible, 10);
}

TEST(Sequences, LmImpliesM)
{
    RngStream rng(33);
    int members = 0;
    for (int t = 0; t < 5000; ++t)
    {
        std::vector<double> x{1.0};
        for (int k = 1; k <= 4; ++k)
            x.push_back(x.back() * (0.2 + 0.8 * rng.uniform()));
        if (check_LM(x).member)
        {
            ++members;
            EXPECT_TRUE(check_M(x).member);
        }
    }
    EXPECT_GT(members, 10);
}

TEST(Sequences, LmSmDuality)
{
    RngStream rng(34);
    for (int t = 0; t < 2000; ++t)
    {
        const int d = 2 + t % 7;
        std::vector<double> b{1.0};
        for (int k = 1; k <= d; ++k)
            b.push_back(b.back() * (0.3 + 0.7 * rng.uniform_open()));
        std::vector<double> ratios;
        for (int k = 1; k <= d; ++k)
            ratios.push_back(b[k] / b[k - 1]);
        EXPECT_EQ(check_LM(b).member, check_SM(ratios).member) << t;
    }
}

TEST(Sequences, LmExtendibleExamples)
{
    const LmExtendibleVerdict bad = lm_extendible(std::vector<double>{1, 0.5, 0.2});
    EXPECT_FALSE(bad.extendible);
    EXPECT_TRUE(bad.exact);
    EXPECT_EQ(bad.failing_power, 1.0);
    const double p = 0.3;
    const LmExtendibleVerdict geo = lm_extendible(std::vector<double>{1, p, p * p, p * p * p});
    EXPECT_TRUE(geo.extendible);
    EXPECT_FALSE(geo.exact);
    EXPECT_EQ(lm_power_grid().size(), 13u);
}

TEST(Sequences, LmExtendibleExactInDimensionTwo)
{
    RngStream rng(35);
    for (int t = 0; t < 500; ++t)
    {
        const double b1 = 0.05 + 0.9 * rng.uniform();
        const double b2 = b1 * b1 + (b1 - b1 * b1) * rng.uniform();
        const std::vector<double> b{1, b1, b2};
        ASSERT_TRUE(check_LM(b).member);
        EXPECT_TRUE(lm_extendible(b).extendible) << b1 << " " << b2;
    }
}

TEST(Sequences, InfinitelyDivisibleMomentsPass)
{
    const std::vector<InfDivLaw> laws{law::Gamma{2.0, 3.0}, law::Gamma{0.5, 1.0},
                                      law::CompoundPoissonExp{1.5, 2.0}, law::Degenerate{0.7},
                                      law::GeometricKilled{0.4, 0.8}};
    for (const InfDivLaw& law : laws)
    {
        for (int d = 2; d <= 10; ++d)
        {
            const ExchangeableSeq b = laplace_moments(law, d, Role::BSeq);
            EXPECT_TRUE(check_LM(b.values).member) << law_name(law) << " d=" << d;
            EXPECT_TRUE(hankel_extendible(b.values).extendible) << law_name(law) << " d=" << d;
            if (d <= 6)
            {
                EXPECT_TRUE(lm_extendible(b.values).extendible) << law_name(law) << " d=" << d;
            }
        }
    }
}

TEST(Sequences, ClassifySequenceReport)
{
    const SequenceClassReport r = classify_sequence(std::vector<double>{1, 0.5, 0.2});
    EXPECT_TRUE(r.in_M.member);
    EXPECT_FALSE(r.in_LM.member);
    EXPECT_FALSE(r.hankel.extendible);
    ASSERT_TRUE(r.lm_ext);
    EXPECT_FALSE(r.lm_ext->extendible);

    const SequenceClassReport z = classify_sequence(std::vector<double>{1, 0.5, 0.0});
    EXPECT_TRUE(z.in_M.member);
    EXPECT_FALSE(z.in_LM.member);
    EXPECT_FALSE(z.lm_ext.has_value());
}
