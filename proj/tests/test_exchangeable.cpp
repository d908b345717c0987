#include <gtest/gtest.h>

#include <cmath>

#include "geomlaw/exchangeable.hpp"
#include "geomlaw/sequences.hpp"
#include "geomlaw/verify.hpp"

using namespace geomlaw;

namespace {

ExchangeableSeq random_p(int d, RngStream& rng)
{
    std::vector<double> p(d);
    for (auto& v : p)
        v = 0.3 + 0.7 * rng.uniform_open();
    p[0] = std::min(p[0], 0.95);
    return make_seq(Role::PNarrow, p);
}

}  // namespace

TEST(Exchangeable, AFromPHandValues)
{
    const ExchangeableSeq a = a_from_p(make_seq(Role::PNarrow, {0.5, 0.8}));
    EXPECT_NEAR(a.values[0], 0.4, 1e-15);
    EXPECT_NEAR(a.values[1], 0.5, 1e-15);

    const double p = 0.3;
    const ExchangeableSeq ind = a_from_p(make_seq(Role::PNarrow, {p, 1, 1}));
    for (double v : ind.values)
        EXPECT_NEAR(v, p, 1e-15);
    const ExchangeableSeq como = a_from_p(make_seq(Role::PNarrow, {1, 1, p}));
    EXPECT_NEAR(como.values[0], p, 1e-15);
    EXPECT_NEAR(como.values[1], 1.0, 1e-15);
    EXPECT_NEAR(como.values[2], 1.0, 1e-15);
    const ExchangeableSeq b = b_from_a(como);
    EXPECT_EQ(b.values, (std::vector<double>{1, p, p, p}));
}

TEST(Exchangeable, AFromPRejectsInvalid)
{
    EXPECT_THROW(a_from_p(make_seq(Role::PNarrow, {1, 1})), Error);
    EXPECT_THROW(a_from_p(make_seq(Role::PNarrow, {0.5, 1.2})), Error);
}

TEST(Exchangeable, PFromAFlagsNonNarrow)
{
    const PFromA r = p_from_a(make_seq(Role::ASeq, {0.5, 0.4}));
    EXPECT_FALSE(r.is_narrow);
    EXPECT_NEAR(r.p.values[0], 0.4, 1e-12);
    EXPECT_NEAR(r.p.values[1], 1.25, 1e-12);
    const PFromA ok = p_from_a(make_seq(Role::ASeq, {0.4, 0.5}));
    EXPECT_TRUE(ok.is_narrow);
    EXPECT_NEAR(ok.p.values[0], 0.5, 1e-12);
    EXPECT_NEAR(ok.p.values[1], 0.8, 1e-12);
}

TEST(Exchangeable, ConversionCycleIsIdentity)
{
    RngStream rng(99);
    for (int t = 0; t < 200; ++t)
    {
        const int d = 1 + t % 8;
        const ExchangeableSeq p = random_p(d, rng);
        const ExchangeableSeq a = a_from_p(p);
        const ExchangeableSeq b = b_from_a(a);
        const PFromA back = p_from_a(a_from_b(b));
        EXPECT_TRUE(back.is_narrow);
        for (int k = 0; k < d; ++k)
            EXPECT_NEAR(back.p.values[k] / p.values[k], 1.0, 1e-10);
    }
}

TEST(Exchangeable, PFromDifferenceOfLogB)
{
    // p_k = exp(-grad^k ln b_{d-k}) = exp(-grad^{k-1} ln a^{-1}_{d-k+1}).
    RngStream rng(4);
    for (int t = 0; t < 50; ++t)
    {
        const int d = 2 + t % 5;
        const ExchangeableSeq p = random_p(d, rng);
        const ExchangeableSeq a = a_from_p(p);
        const ExchangeableSeq b = b_from_a(a);
        std::vector<double> ln_b, ln_a_inv;
        for (double v : b.values)
            ln_b.push_back(std::log(v));
        for (double v : a.values)
            ln_a_inv.push_back(-std::log(v));
        for (int k = 1; k <= d; ++k)
        {
            EXPECT_NEAR(std::exp(-difference(ln_b, k, d - k)), p.values[k - 1], 1e-10);
            EXPECT_NEAR(std::exp(-difference(ln_a_inv, k - 1, d - k)), p.values[k - 1], 1e-10);
        }
    }
}

TEST(Exchangeable, BetaFromPTildeHandValues)
{
    const ExchangeableSeq beta = beta_from_ptilde(make_seq(Role::PTilde, {0.25, 0.25}));
    EXPECT_EQ(beta.values, (std::vector<double>{1, 0.5, 0.25}));
    EXPECT_THROW(beta_from_ptilde(make_seq(Role::PTilde, {1, 0, 0})), Error);
}

TEST(Exchangeable, PTildeFromBetaHandValues)
{
    const PTildeFromBeta r = ptilde_from_beta(make_seq(Role::Beta, {1, 0.5, 0.2}));
    EXPECT_TRUE(r.is_wide);
    EXPECT_NEAR(r.ptilde.values[0], 0.2, 1e-15);
    EXPECT_NEAR(r.ptilde.values[1], 0.3, 1e-15);
    EXPECT_NEAR(r.full_set, 0.2, 1e-15);

    const PTildeFromBeta bad = ptilde_from_beta(make_seq(Role::Beta, {1, 0.9, 0.95}));
    EXPECT_FALSE(bad.is_wide);
    EXPECT_EQ(bad.negative_index, 2);

    for (int d = 2; d <= 6; ++d)
    {
        std::vector<double> x(d + 1, 0.0);
        x[0] = 1;
        x[1] = 1.0 / d;
        EXPECT_TRUE(ptilde_from_beta(make_seq(Role::Beta, x)).is_wide) << d;
    }
}

TEST(Exchangeable, BetaRoundTripExact)
{
    RngStream rng(8);
    for (int t = 0; t < 100; ++t)
    {
        const ExchangeableSeq beta = random_simplex_beta(2 + t % 4, rng);
        const PTildeFromBeta pt = ptilde_from_beta(beta);
        ASSERT_TRUE(pt.is_wide);
        const ExchangeableSeq again = beta_from_ptilde(pt.ptilde);
        for (std::size_t k = 0; k < beta.values.size(); ++k)
            EXPECT_NEAR(again.values[k], beta.values[k], 1e-15);
    }
}

TEST(Exchangeable, SurvivalHandValues)
{
    const double p = 0.7;
    const ExchangeableSeq ind = make_seq(Role::BSeq, {1, p, p * p, p * p * p});
    const ExchangeableSeq como = make_seq(Role::BSeq, {1, p, p, p});
    const std::vector<Count> n{2, 0, 3};
    EXPECT_NEAR(survival_exch_narrow(ind, n), std::pow(p, 5), 1e-15);
    EXPECT_NEAR(survival_exch_narrow(como, n), std::pow(p, 3), 1e-15);
    const std::vector<Count> ones{1, 1};
    EXPECT_NEAR(survival_exch_wide(make_seq(Role::Beta, {1, 0.5, 0.2}), ones), 0.2, 1e-15);
    EXPECT_THROW(survival_exch_wide(ind, n), Error);
}

TEST(Exchangeable, EmbeddedSurvivalAgrees)
{
    RngStream rng(12);
    for (int t = 0; t < 30; ++t)
    {
        const int d = 2 + t % 3;
        const ExchangeableSeq p = random_p(d, rng);
        const ExchangeableSeq b = b_from_a(a_from_p(p));
        const NarrowParams params = to_narrow_params(p);
        const GridComparison c = compare_grids(analytic_grid(survival_fn(params), d, 3),
                                               analytic_grid(survival_fn(b), d, 3), 1e-12);
        EXPECT_TRUE(c.pass) << c.max_abs_deviation;

        const ExchangeableSeq beta = random_simplex_beta(d, rng);
        const WideParams w = to_wide_params(ptilde_from_beta(beta).ptilde);
        const GridComparison cw = compare_grids(analytic_grid(survival_fn(w), d, 3),
                                                analytic_grid(survival_fn(beta), d, 3), 1e-12);
        EXPECT_TRUE(cw.pass) << cw.max_abs_deviation;
    }
}

TEST(Exchangeable, ClassCorrespondence)
{
    RngStream rng(13);
    for (int t = 0; t < 100; ++t)
    {
        const int d = 2 + t % 5;
        const ExchangeableSeq a = a_from_p(random_p(d, rng));
        EXPECT_TRUE(check_SM(a.values).member);
        EXPECT_TRUE(check_LM(b_from_a(a).values).member);
        const ExchangeableSeq beta = random_moment_beta(d, rng);
        EXPECT_NO_THROW(to_wide_params(ptilde_from_beta(beta).ptilde));
    }
}

TEST(Exchangeable, IsExchangeable)
{
    const NarrowParams ind = validate_narrow({{1, 0.5}, {2, 0.5}, {3, 1.0}}, 2);
    const ExchangeabilityVerdict v = is_exchangeable(ind);
    ASSERT_TRUE(v.exchangeable);
    EXPECT_EQ(v.seq->values, (std::vector<double>{0.5, 1.0}));
    EXPECT_FALSE(is_exchangeable(validate_narrow({{1, 0.5}, {2, 0.6}, {3, 1.0}}, 2)).exchangeable);

    const WideParams w = validate_wide({{0, 0.25}, {1, 0.25}, {2, 0.25}, {3, 0.25}}, 2);
    const ExchangeabilityVerdict vw = is_exchangeable(w);
    ASSERT_TRUE(vw.exchangeable);
    EXPECT_EQ(vw.seq->values, (std::vector<double>{0.25, 0.25}));
}

TEST(Exchangeable, ConvertAcrossSenses)
{
    const ExchangeableSeq p = make_seq(Role::PNarrow, {0.5, 0.8});
    const ExchangeableSeq beta = convert(p, Role::Beta);
    EXPECT_NEAR(beta.values[1], 0.4, 1e-15);
    EXPECT_NEAR(beta.values[2], 0.2, 1e-15);
    const ExchangeableSeq back = convert(beta, Role::PNarrow);
    EXPECT_NEAR(back.values[0], 0.5, 1e-12);
    EXPECT_NEAR(back.values[1], 0.8, 1e-12);

    try
    {
        convert(make_seq(Role::Beta, {1, 0.5, 0.2}), Role::PNarrow);
        FAIL() << "expected refusal";
    }
    catch (const Error& e)
    {
        EXPECT_EQ(e.code(), ErrorCode::NotRepresentable);
        EXPECT_NE(std::string(e.what()).find("log-monotone"), std::string::npos);
    }
}

TEST(Exchangeable, ShapeChecks)
{
    EXPECT_THROW(make_seq(Role::Beta, {0.9, 0.5}), Error);
    EXPECT_THROW(make_seq(Role::PNarrow, {}), Error);
    EXPECT_EQ(role_from_string("ptilde"), Role::PTilde);
    EXPECT_THROW(role_from_string("gamma"), Error);
}
