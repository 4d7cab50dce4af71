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

#include <benchmark/benchmark.h>

#include "darisa/cluster_channel.hpp"
#include "darisa/edof_optimizer.hpp"
#include "darisa/metrics.hpp"
#include "darisa/spacetime_channel.hpp"

using namespace darisa;

namespace
{
    ArrayConfig square(Side side, int n, int count) { return {side, n, n, 1.0 / n, count}; }

    void BM_GenerateChannel(benchmark::State &state)
    {
        const int n = int(state.range(0));
        const ClusterSet cs{{Cluster::isotropic()}};
        const auto tx = square(Side::transmit, n, 1), rx = square(Side::receive, n, 1);
        std::uint64_t seed = 0;
        for (auto _ : state)
            benchmark::DoNotOptimize(generate_channel(cs, tx, rx, ++seed));
    }
    BENCHMARK(BM_GenerateChannel)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

    void BM_Spectrum(benchmark::State &state)
    {
        const Eigen::Index n = state.range(0);
        const CMatrix H = CMatrix::Random(n, n);
        for (auto _ : state)
            benchmark::DoNotOptimize(spectrum(H));
    }
    BENCHMARK(BM_Spectrum)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

    SdrProblem problem(int K, int n, int M)
    {
        const ClusterSet cs{{Cluster::isotropic()}};
        const auto tx = ArrayConfig{Side::transmit, 2, 2, 0.5, M}, rx = square(Side::receive, n, 2);
        const auto ch = generate_channel(cs, tx, rx, 11);
        return build_sdr_problem(ch.H_w, PhaseSchedule::random(K, tx, rx, 11));
    }

    void BM_SolveSubproblem(benchmark::State &state)
    {
        const auto p = problem(int(state.range(0)), int(state.range(1)), 4);
        const double zeta = 0.5 * (1.0 + zeta_upper_bound(p));
        for (auto _ : state)
            benchmark::DoNotOptimize(solve_subproblem(p, zeta));
    }
    BENCHMARK(BM_SolveSubproblem)->Args({2, 2})->Args({2, 4})->Args({4, 4})->Unit(benchmark::kMillisecond);

    void BM_Bisection(benchmark::State &state)
    {
        const auto p = problem(int(state.range(0)), 3, 4);
        for (auto _ : state)
            benchmark::DoNotOptimize(dinkelbach_bisect(p));
    }
    BENCHMARK(BM_Bisection)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

    void BM_Randomize(benchmark::State &state)
    {
        const auto p = problem(2, 4, 4);
        const auto E = solve_subproblem(p, 1.5);
        for (auto _ : state)
            benchmark::DoNotOptimize(gaussian_randomize(E, p, int(state.range(0)), 5, 2));
    }
    BENCHMARK(BM_Randomize)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
}
BENCHMARK_MAIN();
