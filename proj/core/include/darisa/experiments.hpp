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
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "darisa/edof_optimizer.hpp"
#include "darisa/scenario.hpp"

namespace darisa
{
    struct Stat
    {
        double mean = 0.0;
        double std = 0.0; // sample standard deviation
        int count = 0;
    };

    // Summation in input order, NaNs skipped.
    Stat summarize(const std::vector<double> &values);

    struct RunOptions
    {
        int threads = 1;
    };

    // Calls fn(i) for i in [0, count) on up to `threads` workers. The first
    // exception (lowest index) is rethrown after all workers finish.
    void parallel_for(int count, int threads, const std::function<void(int)> &fn);

    struct TrialRecord
    {
        std::string series;
        double axis_value = 0.0;
        int trial = 0;
        std::uint64_t seed = 0;
        int rank = 0;
        double edof_random = 0.0;
        double edof_optimized = 0.0;
        double edof_relaxed = 0.0;
        double capacity_exact_random = 0.0;
        double capacity_approx_random = 0.0;
        double capacity_exact_optimized = 0.0;
        double capacity_approx_optimized = 0.0;
        bool optimized = false; // optimizer ran and succeeded
        std::string error;
        double zeta_opt = 0.0;
        int subproblem_solves = 0;
        std::vector<BisectionStep> trace;
    };

    struct SweepRow
    {
        std::string series;
        double axis_value = 0.0;
        int trials = 0;
        int failures = 0;
        Stat rank;
        Stat edof_random;
        Stat edof_optimized;
        Stat edof_relaxed;
        Stat capacity_exact_random;
        Stat capacity_approx_random;
        Stat capacity_exact_optimized;
        Stat capacity_approx_optimized;
        double lemma1_dof = 0.0;
        int theorem1_dof = 0;
        double reference_snr_db = 0.0;
    };

    struct SweepResult
    {
        std::string experiment;
        std::string axis;
        bool has_optimizer = false;
        std::vector<SweepRow> rows;
        std::vector<TrialRecord> trials; // series-major, then axis, then trial
    };

    // Mean numerical rank of H_w per axis point (aperture, spread or elements).
    SweepResult run_dof_sweep(const Scenario &scenario, const RunOptions &options = {});

    // Random-phase versus optimized EDoF of the composite channel along `axis`
    // (spacing, K, element_count or bits; bits value 0 means continuous phases).
    SweepResult run_edof_experiments(const Scenario &scenario, const std::string &axis,
                                     const RunOptions &options = {});

    struct SpectrumCurve
    {
        std::string series;
        std::string scheme; // random or optimized
        std::vector<double> lambda_mean;  // singular values, descending
        std::vector<double> lambda2_mean; // squared singular values
        Stat edof;
        Stat spread; // lambda_1^2 / lambda_d^2 over the top theorem1_dof values
        int failures = 0;
    };

    struct CapacityPoint
    {
        std::string series;
        std::string scheme;
        double snr_db = 0.0;
        Stat exact;
        Stat approx;
    };

    struct EigenCapacityResult
    {
        std::vector<SpectrumCurve> spectra;
        std::vector<CapacityPoint> capacity;
        std::vector<TrialRecord> trials;
    };

    EigenCapacityResult run_eigen_capacity(const Scenario &scenario, const RunOptions &options = {});

    struct PredictionRow
    {
        std::string series;
        double axis_value = 0.0;
        double c1_t = 0.0, c2_t = 0.0, c1_r = 0.0, c2_r = 0.0;
        double d_t = 0.0, d_r = 0.0;
        double lemma1_dof = 0.0;
        int theorem1_dof = 0;
        std::size_t lattice_t = 0, lattice_r = 0;
    };

    std::vector<PredictionRow> run_prediction(const Scenario &scenario);

    struct SingleOptimization
    {
        TrialRecord record;
        OptimizationReport report;
        double edof_before = 0.0; // all-zero receive phases
        int theorem1_dof = 0;
    };

    // One channel (trial 0 of the first series) through the full optimizer.
    SingleOptimization run_single_optimization(const Scenario &scenario);

    // H_C from a problem's B factor and receive phases.
    CMatrix composite_from_phases(const SdrProblem &prob, const std::vector<double> &rx_phases);

    // H_C scaled to squared Frobenius norm equal to its column count.
    CMatrix normalize_for_capacity(const CMatrix &H_C);

    void write_csv(std::ostream &out, const SweepResult &result);
    void write_csv(std::ostream &out, const std::vector<PredictionRow> &rows);
    void write_spectrum_csv(std::ostream &out, const EigenCapacityResult &result);
    void write_capacity_csv(std::ostream &out, const EigenCapacityResult &result);

    std::string to_json(const SweepResult &result);
    std::string to_json(const EigenCapacityResult &result);
    std::string to_json(const std::vector<PredictionRow> &rows);
    std::string to_json(const SingleOptimization &result);

    // Machine-readable error record for fatal CLI failures.
    std::string error_json(const std::string &kind, const std::string &message);

    // Fixed formatting shared by every writer.
    std::string format_number(double value);
}
