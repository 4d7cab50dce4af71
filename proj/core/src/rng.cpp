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

#include "darisa/rng.hpp"

#include <cmath>

namespace darisa
{
    namespace
    {
        constexpr std::uint32_t kMul0 = 0xD2511F53u;
        constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
        constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
        constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

        inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t &hi, std::uint32_t &lo)
        {
            const std::uint64_t product = std::uint64_t(a) * std::uint64_t(b);
            hi = std::uint32_t(product >> 32);
            lo = std::uint32_t(product);
        }
    }

    Philox4x32::Counter Philox4x32::block(Counter ctr, Key key)
    {
        for (int round = 0; round < 10; ++round)
        {
            if (round > 0)
            {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            std::uint32_t hi0, lo0, hi1, lo1;
            mulhilo(kMul0, ctr[0], hi0, lo0);
            mulhilo(kMul1, ctr[2], hi1, lo1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

    CounterRng::CounterRng(std::uint64_t seed, Stream stream, std::uint32_t substream)
        : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)},
          stream_(static_cast<std::uint32_t>(stream)),
          substream_(substream)
    {
    }

    void CounterRng::refill()
    {
        const Philox4x32::Counter ctr{std::uint32_t(position_), std::uint32_t(position_ >> 32), stream_, substream_};
        buffer_ = Philox4x32::block(ctr, key_);
        ++position_;
        used_ = 0;
    }

    std::uint32_t CounterRng::next_u32()
    {
        if (used_ == 4)
            refill();
        return buffer_[used_++];
    }

    std::uint64_t CounterRng::next_u64()
    {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    double CounterRng::uniform()
    {
        // 53-bit mantissa, offset by half an ulp so the result lies in (0, 1)
        return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double CounterRng::normal()
    {
        if (has_spare_)
        {
            has_spare_ = false;
            return spare_normal_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        spare_normal_ = radius * std::sin(kTwoPi * u2);
        has_spare_ = true;
        return radius * std::cos(kTwoPi * u2);
    }

    cplx CounterRng::complex_normal()
    {
        const double re = normal();
        const double im = normal();
        return {re * M_SQRT1_2, im * M_SQRT1_2};
    }

    double CounterRng::phase()
    {
        return kTwoPi * (1.0 - uniform());
    }

    const char *to_string(Side side)
    {
        return side == Side::transmit ? "transmit" : "receive";
    }

    const char *to_string(ErrorKind kind)
    {
        switch (kind)
        {
        case ErrorKind::invalid_argument:
            return "invalid_argument";
        case ErrorKind::degenerate_cluster:
            return "degenerate_cluster";
        case ErrorKind::dimension_mismatch:
            return "dimension_mismatch";
        case ErrorKind::solver_failure:
            return "solver_failure";
        case ErrorKind::config:
            return "config";
        }
        return "unknown";
    }
}
