#include "tzone/rng.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

namespace {

using tzone::rng::NormalStream;
using tzone::rng::Philox4x32;

// Known-answer vectors of the Random123 distribution (kat_vectors, philox4x32 10 rounds).
TEST(Philox, KnownAnswers) {
    EXPECT_EQ(Philox4x32::generate({0, 0, 0, 0}, {0, 0}),
              (Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
    EXPECT_EQ(Philox4x32::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}),
              (Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
    EXPECT_EQ(Philox4x32::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}),
              (Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(OpenUnit, NeverHitsEndpoints) {
    EXPECT_GT(tzone::rng::to_open_unit(0), 0.0);
    EXPECT_LT(tzone::rng::to_open_unit(~0ull), 1.0);
}

TEST(NormalStream, PureFunctionOfAddress) {
    NormalStream a(7, 3);
    NormalStream b(7, 3);
    std::vector<double> forward;
    for (std::uint64_t i = 0; i < 1000; ++i) forward.push_back(a(i));
    for (std::uint64_t i = 1000; i-- > 0;) EXPECT_EQ(b(i), forward[i]);
}

TEST(NormalStream, StreamsAndSeedsDiffer) {
    NormalStream a(7, 3);
    NormalStream b(7, 4);
    NormalStream c(8, 3);
    int same_stream = 0;
    int same_seed = 0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        const double x = a(i);
        same_stream += x == b(i);
        same_seed += x == c(i);
    }
    EXPECT_EQ(same_stream, 0);
    EXPECT_EQ(same_seed, 0);
}

TEST(NormalStream, Moments) {
    NormalStream g(20240611, 0);
    const std::size_t n = 2'000'000;
    double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
    std::size_t beyond3 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = g(i);
        m1 += x;
        m2 += x * x;
        m3 += x * x * x;
        m4 += x * x * x * x;
        beyond3 += std::abs(x) > 3.0;
    }
    m1 /= n;
    m2 /= n;
    m3 /= n;
    m4 /= n;
    // 5-sigma bands for the sample moments
    EXPECT_NEAR(m1, 0.0, 5.0 * std::sqrt(1.0 / n));
    EXPECT_NEAR(m2, 1.0, 5.0 * std::sqrt(2.0 / n));
    EXPECT_NEAR(m3, 0.0, 5.0 * std::sqrt(15.0 / n));
    EXPECT_NEAR(m4, 3.0, 5.0 * std::sqrt(96.0 / n));
    const double p3 = 2.0 * 0.0013498980316301;  // P(|Z| > 3)
    EXPECT_NEAR(static_cast<double>(beyond3) / n, p3, 5.0 * std::sqrt(p3 / n));
}

}  // namespace
