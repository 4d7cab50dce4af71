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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "darisa/spacetime_channel.hpp"
#include "darisa/types.hpp"

namespace darisa
{
    // Receive-side phase design problem for a fixed transmit schedule.
    // C = B B^H with B = blkdiag(H_w, ..., H_w) Q_bar_t. Only the factor B is
    // stored; block b = k N + n owns rows [b N_r, (b + 1) N_r).
    struct SdrProblem
    {
        int K = 0, N = 0, N_r = 0, M = 0;
        CMatrix B;                // (K N N_r) x M
        PhaseSchedule schedule;   // transmit phases are taken from here
        std::optional<int> dof_limit; // predicted bound on the composite rank, if known

        int block_count() const { return K * N; }
        int block_size() const { return N_r; }
        auto block(int b) const { return B.middleRows(Eigen::Index(b) * N_r, N_r); }

        double trace_c() const { return B.squaredNorm(); }
        CMatrix dense_c() const;
    };

    SdrProblem build_sdr_problem(const CMatrix &H_w, const PhaseSchedule &schedule,
                                 std::optional<int> dof_limit = std::nullopt);

    struct SolverOptions
    {
        // Converged when the relative stationarity residual is below tol and the
        // certified gap is below gap_tol, or when the gap alone is below tol.
        double tol = 1e-6;
        double gap_tol = 1e-3;
        int max_iters = 5000;
        // Also stop as soon as the sign of max f is certain.
        bool stop_on_sign = false;
        // Columns of each factor V_b at a cold start; 0 picks a size-based default.
        int initial_rank = 0;
    };

    // Block-diagonal relaxed matrix E = blkdiag(E_1, ..., E_{KN}) with each
    // block held in factored form E_b = V_b V_b^H.
    struct RelaxedSolution
    {
        std::vector<CMatrix> factors;
        double objective = 0.0;   // f(E) = Tr(S) - zeta ||S||_F, a lower bound on max f
        double upper_bound = 0.0; // certified upper bound on max f (infinite if never certified)
        double ratio = 0.0;       // Tr(S) / ||S||_F at E
        double feasibility_residual = 0.0;
        double stationarity_residual = 0.0; // Riemannian gradient norm relative to Tr(C)
        double duality_gap = 0.0;           // upper_bound - objective
        int iterations = 0;
        int rank = 0;
        bool converged = false;

        CMatrix block(int b) const { return factors[b] * factors[b].adjoint(); }
        CMatrix dense() const;
    };

    // Maximizes Tr(C E) - zeta ||.||_F over unit-diagonal PSD block-diagonal E,
    // where the norm is that of S = sum_b B_b^H E_b B_b (see README).
    RelaxedSolution solve_subproblem(const SdrProblem &prob, double zeta, const SolverOptions &options = {},
                                     const RelaxedSolution *warm_start = nullptr);

    double evaluate_F(const SdrProblem &prob, double zeta, const SolverOptions &options = {});

    // Tr(S) / ||S||_F for a given block-diagonal E, and for unit-modulus receive vectors.
    double relaxed_ratio(const SdrProblem &prob, const std::vector<CMatrix> &factors);
    double phase_edof(const SdrProblem &prob, const std::vector<double> &rx_phases);

    struct BisectionStep
    {
        double zeta = 0.0;
        double F = 0.0;
        double F_upper = 0.0;
        int solver_iterations = 0;
        bool converged = false;
    };

    struct DinkelbachRun
    {
        double zeta_low = 1.0;  // final bracket
        double zeta_high = 1.0;
        double zeta_upper_initial = 1.0;
        double zeta_opt = 1.0;
        double F_low = 0.0;  // F(zeta_low) at the initial bracket
        double F_high = 0.0; // F(zeta_high) at the initial bracket
        std::vector<BisectionStep> iterations;
        int subproblem_solves = 0;
        RelaxedSolution E_opt;
        PhaseSchedule recovered_phases;
        double achieved_edof = 0.0;
    };

    struct BisectionOptions
    {
        double epsilon = 1e-3;
        SolverOptions solver;
    };

    // Upper end of the initial bracket: sqrt(max(dof_limit, min(M, rank B))).
    double zeta_upper_bound(const SdrProblem &prob);

    // Throws Error(solver_failure) when F changes sign the wrong way at the
    // bracket ends.
    DinkelbachRun dinkelbach_bisect(const SdrProblem &prob, const BisectionOptions &options = {});

    struct RandomizationResult
    {
        PhaseSchedule schedule; // transmit phases from the problem, receive phases recovered
        double achieved_edof = 0.0;
        int best_draw = -1; // -1 is the principal-eigenvector candidate
    };

    // Draws xi_b ~ CN(0, E_b) jointly for all blocks, keeps the phases of xi and
    // scores the whole schedule. With `bits` the candidate phases are quantized
    // before scoring.
    RandomizationResult gaussian_randomize(const RelaxedSolution &E_opt, const SdrProblem &prob, int num_draws,
                                           std::uint64_t seed, std::optional<int> bits = std::nullopt);

    // Nearest element of {0, 2 pi / 2^b, ..., 2 pi (2^b - 1) / 2^b} in circular distance.
    double quantize_phase(double phase, int bits);
    std::vector<double> quantize_phases(const std::vector<double> &phases, int bits);

    struct OptimizerOptions
    {
        BisectionOptions bisection;
        int num_draws = 100;
        std::optional<int> bits;
    };

    struct OptimizationReport
    {
        DinkelbachRun run;
        double relaxed_edof = 0.0;    // zeta_opt^2
        double randomized_edof = 0.0; // continuous phases
        std::optional<double> quantized_edof;
        PhaseSchedule continuous_schedule;
    };

    // Full pipeline: bisection, randomization, optional quantization. The run's
    // recovered_phases and achieved_edof hold the final (quantized if requested) result.
    OptimizationReport optimize_receive_phases(const SdrProblem &prob, const OptimizerOptions &options,
                                               std::uint64_t seed);
}
