#include <gtest/gtest.h>

#include "geomlaw/subset_algebra.hpp"

using namespace geomlaw;

TEST(SubsetAlgebra, BinomialSmallAndLarge)
{
    EXPECT_EQ(binomial(0, 0), 1u);
    EXPECT_EQ(binomial(5, 2), 10u);
    EXPECT_EQ(binomial(5, 7), 0u);
    EXPECT_EQ(binomial(30, 15), 155117520u);
    EXPECT_EQ(binomial(62, 31), 465428353255261088ULL);
}

TEST(SubsetAlgebra, DifferenceOperator)
{
    const std::vector<double> x{1.0, 0.5, 0.2};
    EXPECT_DOUBLE_EQ(difference(x, 0, 2), 0.2);
    EXPECT_DOUBLE_EQ(difference(x, 1, 1), 0.3);
    EXPECT_DOUBLE_EQ(difference(x, 2, 0), 1.0 - 1.0 + 0.2);
    EXPECT_THROW(difference(x, 2, 1), Error);
}

TEST(SubsetAlgebra, OrderStatsAreStable)
{
    const std::vector<Count> n{3, 1, 3, 0};
    const OrderStats s = order_stats(n);
    EXPECT_EQ(s.sorted, (std::vector<Count>{0, 1, 3, 3}));
    EXPECT_EQ(s.perm, (std::vector<int>{3, 1, 0, 2}));
}

TEST(SubsetAlgebra, MasksAndIteration)
{
    const SubsetMask m{0b101, 3};
    EXPECT_TRUE(m.contains(0));
    EXPECT_FALSE(m.contains(1));
    EXPECT_EQ(m.size(), 2);
    EXPECT_EQ(m.complement().bits, 0b010u);

    int count = 0;
    for (SubsetMask s : subsets_iter(4))
        count += s.dim == 4;
    EXPECT_EQ(count, 16);

    int pairs = 0;
    for ([[maybe_unused]] SubsetMask s : subsets_iter(4, [](SubsetMask s) { return s.size() == 2; }))
        ++pairs;
    EXPECT_EQ(pairs, 6);
}

TEST(SubsetAlgebra, CompressBits)
{
    EXPECT_EQ(compress_bits(0b1010, 0b1110), 0b101u);
    EXPECT_EQ(compress_bits(0b0001, 0b1110), 0u);
}

TEST(SubsetAlgebra, DimensionGuard)
{
    EXPECT_THROW(check_dim(0), Error);
    EXPECT_THROW(check_dim(31), Error);
    try
    {
        check_dim(40);
    }
    catch (const Error& e)
    {
        EXPECT_EQ(e.code(), ErrorCode::DimensionTooLarge);
    }
}
