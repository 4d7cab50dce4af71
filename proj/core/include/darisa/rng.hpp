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

#pragma once

#include <array>
#include <cstdint>

#include "darisa/types.hpp"

namespace darisa
{
    // Philox4x32-10 counter-based generator (Salmon et al., Random123).
    // A draw is a pure function of (key, counter), so any stream can be
    // reproduced or split without sharing state.
    class Philox4x32
    {
    public:
        using Counter = std::array<std::uint32_t, 4>;
        using Key = std::array<std::uint32_t, 2>;

        static Counter block(Counter counter, Key key);
    };

    // Purpose tags. Each tag selects an independent stream under one seed.
    enum class Stream : std::uint32_t
    {
        channel = 1,
        random_phases = 2,
        randomization = 3,
        noise = 4,
        test = 0xffff
    };

    // Sequential view over a Philox stream: key = 64-bit seed,
    // counter = (position lo, position hi, stream tag, substream).
    class CounterRng
    {
    public:
        CounterRng(std::uint64_t seed, Stream stream, std::uint32_t substream = 0);

        std::uint32_t next_u32();
        std::uint64_t next_u64();
        double uniform();        // (0, 1), never 0 or 1
        double normal();         // N(0, 1), Box-Muller
        cplx complex_normal();   // CN(0, 1): real and imaginary parts each N(0, 1/2)
        double phase();          // uniform on (0, 2*pi]

    private:
        void refill();

        Philox4x32::Key key_;
        std::uint64_t position_ = 0;
        std::uint32_t stream_;
        std::uint32_t substream_;
        Philox4x32::Counter buffer_{};
        int used_ = 4;
        double spare_normal_ = 0.0;
        bool has_spare_ = false;
    };

    // Per-trial seed derivation.
    inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial_index)
    {
        return seed ^ trial_index;
    }
}
