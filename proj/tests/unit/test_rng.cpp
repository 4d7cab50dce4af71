// Copyright 2026 The darisa-mimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "darisa/rng.hpp"

using namespace darisa;

TEST(Philox, KnownAnswerZero)
{
    const auto out = Philox4x32::block({0, 0, 0, 0}, {0, 0});
    EXPECT_EQ(out[0], 0x6627e8d5u);
    EXPECT_EQ(out[1], 0xe169c58du);
    EXPECT_EQ(out[2], 0xbc57ac4cu);
    EXPECT_EQ(out[3], 0x9b00dbd8u);
}

TEST(Philox, KnownAnswerOnes)
{
    const auto out = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
    EXPECT_EQ(out[0], 0x408f276du);
    EXPECT_EQ(out[1], 0x41c83b0eu);
    EXPECT_EQ(out[2], 0xa20bc7c6u);
    EXPECT_EQ(out[3], 0x6d5451fdu);
}

TEST(Philox, KnownAnswerPi)
{
    const auto out = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
    EXPECT_EQ(out[0], 0xd16cfe09u);
    EXPECT_EQ(out[1], 0x94fdccebu);
    EXPECT_EQ(out[2], 0x5001e420u);
    EXPECT_EQ(out[3], 0x24126ea1u);
}

TEST(CounterRng, ReproducibleForEqualSeed)
{
    CounterRng a(7, Stream::test), b(7, Stream::test);
    for (int i = 0; i < 100; ++i)
        EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(CounterRng, StreamsAndSubstreamsDiffer)
{
    CounterRng a(7, Stream::channel), b(7, Stream::noise), c(7, Stream::channel, 1);
    const auto x = a.next_u64();
    EXPECT_NE(x, b.next_u64());
    EXPECT_NE(x, c.next_u64());
}

TEST(CounterRng, UniformStaysInOpenInterval)
{
    CounterRng r(1, Stream::test);
    double sum = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i)
    {
        const double u = r.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / n, 0.5, 0.01);
}

TEST(CounterRng, PhaseInHalfOpenCircle)
{
    CounterRng r(3, Stream::test);
    for (int i = 0; i < 5000; ++i)
    {
        const double p = r.phase();
        ASSERT_GT(p, 0.0);
        ASSERT_LE(p, kTwoPi);
    }
}

TEST(CounterRng, ComplexNormalMoments)
{
    CounterRng r(11, Stream::test);
    const int n = 40000;
    cplx mean = 0.0;
    double power = 0.0, re2 = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const cplx z = r.complex_normal();
        mean += z;
        power += std::norm(z);
        re2 += z.real() * z.real();
    }
    EXPECT_NEAR(std::abs(mean / double(n)), 0.0, 0.02);
    EXPECT_NEAR(power / n, 1.0, 0.03);
    EXPECT_NEAR(re2 / n, 0.5, 0.02);
}

TEST(TrialSeed, XorsIndex)
{
    EXPECT_EQ(trial_seed(0b1010, 0b0110), 0b1100u);
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 100; ++i)
        seen.insert(trial_seed(20240601, i));
    EXPECT_EQ(seen.size(), 100u);
}
