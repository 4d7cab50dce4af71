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

#include <cstddef>

#include "darisa/array_geometry.hpp"
#include "darisa/cluster_channel.hpp"

namespace darisa
{
    // Normalized semi-axes of the axis-aligned ellipse that bounds every
    // cluster support after projection onto the wavenumber plane.
    struct SupportEllipse
    {
        double c1 = 0.0; // along kappa_x
        double c2 = 0.0; // along kappa_y
    };

    struct EllipseGrid
    {
        int azimuth_points = 721;
        int zenith_points = 361;
    };

    SupportEllipse support_ellipse(const ClusterSet &clusters, Side side, const EllipseGrid &grid = {});

    struct DofPrediction
    {
        double d_t = 0.0;
        double d_r = 0.0;
        double lemma1_dof = 0.0;
        int theorem1_dof = 0;
    };

    // d_g ~ c1 c2 pi D_x D_y on each side; lemma1_dof = min(d_r, d_t).
    // theorem1_dof is left at 0.
    DofPrediction lemma1_dof(const Aperture &aperture_t, const Aperture &aperture_r,
                             const SupportEllipse &ellipse_t, const SupportEllipse &ellipse_r);

    // min(K N, M, floor(d_t), floor(d_r))
    int theorem1_dof(int K, int N, int M, double d_t, double d_r);

    // Aperture DoF and composite-channel DoF for a concrete scenario.
    DofPrediction predict_dof(const ArrayConfig &tx, const ArrayConfig &rx, const ClusterSet &clusters, int K,
                              const EllipseGrid &grid = {});

    // |{p in Z^2 : (p_x/D_x)^2 + (p_y/D_y)^2 <= 1}|
    std::size_t lattice_cardinality(const Aperture &aperture);
}
