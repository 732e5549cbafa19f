#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "elastica/random.hpp"

using namespace elastica;

TEST(SplitMix64, MatchesReferenceSequence) {
    // First outputs of the reference implementation seeded with 0.
    SplitMix64 rng(0);
    EXPECT_EQ(rng(), 0xe220a8397b1dcdafULL);
    EXPECT_EQ(rng(), 0x6e789e6aa1b965f4ULL);
    EXPECT_EQ(rng(), 0x06c45d188009454fULL);
}

TEST(DeriveStreamSeed, Deterministic) {
    EXPECT_EQ(derive_stream_seed(99, 3, 4), derive_stream_seed(99, 3, 4));
    static_assert(derive_stream_seed(1, 2, 3) == derive_stream_seed(1, 2, 3));
}

TEST(DeriveStreamSeed, GoldenValues) {
    // Frozen from the first run of the mixing function (cross-checked in Python).
    EXPECT_EQ(derive_stream_seed(20240601, 7, 42), 0x5dd2e90429125002ULL);
    EXPECT_EQ(derive_stream_seed(0, 0, 0), 0xc28ba1e5a8720bc9ULL);
}

TEST(DeriveStreamSeed, NoCollisionsOnAGrid) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t r = 0; r < 200; ++r) {
        for (std::uint64_t p = 0; p < 500; ++p) {
            seen.insert(derive_stream_seed(12345, r, p));
        }
    }
    EXPECT_EQ(seen.size(), 200u * 500u);
    EXPECT_NE(derive_stream_seed(7, 0, 0), derive_stream_seed(7, 0, 1));
    EXPECT_NE(derive_stream_seed(7, 0, 1), derive_stream_seed(7, 1, 0));
}

TEST(NormalStream, MomentsOfStandardNormal) {
    NormalStream z(2024);
    const int n = 400000;
    double s1 = 0.0, s2 = 0.0, s4 = 0.0;
    for (int k = 0; k < n; ++k) {
        const double v = z();
        s1 += v;
        s2 += v * v;
        s4 += v * v * v * v;
    }
    const double mean = s1 / n;
    const double var = s2 / n - mean * mean;
    EXPECT_LT(std::abs(mean), 4.0 / std::sqrt(n));
    EXPECT_LT(std::abs(var - 1.0), 4.0 * std::sqrt(2.0 / n));
    EXPECT_LT(std::abs(s4 / n - 3.0), 4.0 * std::sqrt(96.0 / n));
}

TEST(NormalStream, ReproducibleFromSeed) {
    NormalStream a(77), b(77);
    for (int k = 0; k < 1000; ++k) {
        ASSERT_EQ(a(), b());
    }
}
