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

#include "darisa/types.hpp"

namespace darisa
{
    inline constexpr double kDefaultRankThreshold = 1e-3;

    struct SpectrumReport
    {
        RVector singular_values; // descending
        int numerical_rank = 0;
        double edof = 0.0;
        double condition_number = 0.0; // max lambda^2 / min retained lambda^2
        bool degenerate = false;       // all-zero input
    };

    // Rank counts singular values above rank_threshold * max. EDoF uses the
    // whole spectrum.
    SpectrumReport spectrum(const CMatrix &matrix, double rank_threshold = kDefaultRankThreshold);

    // (sum s^2)^2 / sum s^4, 0 for an all-zero spectrum.
    double edof_from_singular_values(const RVector &singular_values);
    double edof(const CMatrix &matrix);

    // psi * log2(1 + snr / psi); 0 when psi is 0.
    double capacity_edof_approx(double psi, double snr);

    // log2 det(I + (snr / cols) M M^H)
    double capacity_exact(const CMatrix &matrix, double snr);
}
