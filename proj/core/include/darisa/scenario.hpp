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

#include "darisa/array_geometry.hpp"
#include "darisa/cluster_channel.hpp"

namespace darisa
{
    inline constexpr std::uint64_t kDefaultSeed = 20240601;
    inline constexpr const char *kSeedEnvironmentVariable = "DARISA_SEED";

    struct OptimizerKnobs
    {
        double epsilon = 1e-3;
        double tol = 1e-6;
        int max_iters = 5000;
        int num_draws = 100;
    };

    struct SweepSpec
    {
        std::string axis; // aperture, spread, elements, spacing, K, element_count, bits
        std::vector<double> values;
    };

    struct ScenarioConfig
    {
        std::string label = "default";
        ArrayConfig tx{Side::transmit, 4, 4, 0.25, 1};
        ArrayConfig rx{Side::receive, 4, 4, 0.25, 1};
        ClusterSet clusters{{Cluster::isotropic()}};
        int K = 1;
        std::vector<double> snr_db{0.0, 10.0, 20.0, 30.0};
        int trials = 100;
        std::uint64_t seed = kDefaultSeed;
        double rank_threshold = 1e-3;
        std::optional<int> quantization_bits;
        OptimizerKnobs optimizer;
        SweepSpec sweep;

        void validate() const;
    };

    // One configuration per plotted curve. A file without "series" yields one entry.
    struct Scenario
    {
        std::vector<ScenarioConfig> series;
    };

    struct ScenarioOverrides
    {
        std::optional<std::uint64_t> seed;
        std::optional<int> trials;
    };

    // Seed precedence: override, then the file, then DARISA_SEED, then kDefaultSeed.
    Scenario parse_scenario(const std::string &json_text, const ScenarioOverrides &overrides = {});
    Scenario load_scenario(const std::string &path, const ScenarioOverrides &overrides = {});

    // Copy of `cfg` with the sweep axis set to `value`. Geometric axes keep the
    // DARISA aperture fixed unless the axis is the aperture itself.
    ScenarioConfig apply_axis(const ScenarioConfig &cfg, const std::string &axis, double value);

    double degrees(double radians);
    double radians(double degrees);
}
