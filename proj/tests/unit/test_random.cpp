#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "lsketch/random.hpp"

using namespace lsketch;

TEST(Philox, KnownAnswerZero) {
    const auto out = Philox4x32::block({0, 0, 0, 0}, {0, 0});
    const Philox4x32::Counter expected{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u};
    EXPECT_EQ(out, expected);
}

TEST(Philox, KnownAnswerAllOnes) {
    const std::uint32_t f = 0xffffffffu;
    const auto out = Philox4x32::block({f, f, f, f}, {f, f});
    const Philox4x32::Counter expected{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu};
    EXPECT_EQ(out, expected);
}

TEST(Philox, KnownAnswerPiDigits) {
    const auto out = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                       {0xa4093822u, 0x299f31d0u});
    const Philox4x32::Counter expected{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u};
    EXPECT_EQ(out, expected);
}

TEST(RandomStream, EqualSeedsGiveEqualStreams) {
    RandomStream a(42, "label", 3);
    RandomStream b(42, "label", 3);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(RandomStream, LabelsAndIndicesSeparateStreams) {
    RandomStream a(42, "alpha");
    RandomStream b(42, "beta");
    RandomStream c(42, "alpha", 1);
    const auto x = a.next_u64();
    EXPECT_NE(x, b.next_u64());
    EXPECT_NE(x, c.next_u64());
}

TEST(RandomStream, UniformInUnitInterval) {
    RandomStream s(7, "u");
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = s.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / n, 0.5, 5.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(RandomStream, OpenLowNeverZero) {
    RandomStream s(9, "u");
    for (int i = 0; i < 10000; ++i) {
        const double u = s.uniform_open_low();
        ASSERT_GT(u, 0.0);
        ASSERT_LE(u, 1.0);
    }
}

TEST(RandomStream, BelowIsInRangeAndCoversAll) {
    RandomStream s(11, "below");
    std::vector<int> counts(7, 0);
    for (int i = 0; i < 70000; ++i) {
        const auto v = s.below(7);
        ASSERT_LT(v, 7u);
        ++counts[v];
    }
    for (int c : counts) EXPECT_NEAR(c, 10000, 6.0 * std::sqrt(10000.0 * 6.0 / 7.0));
}

TEST(RandomStream, NormalMoments) {
    RandomStream s(13, "normal");
    const int n = 200000;
    double m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = s.normal();
        m1 += z;
        m2 += z * z;
    }
    m1 /= n;
    m2 /= n;
    EXPECT_NEAR(m1, 0.0, 5.0 / std::sqrt(n));
    EXPECT_NEAR(m2, 1.0, 5.0 * std::sqrt(2.0 / n));
}

TEST(DeriveSeed, DistinctAcrossLabelsAndIndices) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 100; ++i) {
        seen.insert(derive_seed(1, "a", i));
        seen.insert(derive_seed(1, "b", i));
    }
    EXPECT_EQ(seen.size(), 200u);
    EXPECT_EQ(derive_seed(5, "x", 2), derive_seed(5, "x", 2));
}
