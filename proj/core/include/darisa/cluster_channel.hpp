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
#include <vector>

#include "darisa/array_geometry.hpp"
#include "darisa/types.hpp"

namespace darisa
{
    // Angular support of one cluster side: [center - spread, center + spread]
    // in azimuth and zenith (radians). Zenith is measured from the array normal.
    struct AngularSupport
    {
        double center_azimuth = 0.0;
        double center_zenith = 0.0;
        double spread_azimuth = 0.0;
        double spread_zenith = 0.0;

        bool is_point() const { return spread_azimuth == 0.0 && spread_zenith == 0.0; }
        bool contains(double azimuth, double zenith) const;
    };

    struct Cluster
    {
        AngularSupport departure;
        AngularSupport arrival;

        const AngularSupport &support(Side side) const
        {
            return side == Side::transmit ? departure : arrival;
        }

        // Full azimuth circle and zenith in [0, pi] on both sides.
        static Cluster isotropic();
    };

    struct ClusterSet
    {
        std::vector<Cluster> clusters;

        std::size_t size() const { return clusters.size(); }
        double power_normalization() const;
        void validate() const;
    };

    struct DirectionSample
    {
        double azimuth = 0.0;
        double zenith = 0.0;
        std::array<double, 2> wavenumber_xy{}; // (sin(zen) cos(az), sin(zen) sin(az))
        std::array<int, 2> lattice{};          // integer lattice coordinates (p_x, p_y)
    };

    // (sin(zenith) cos(azimuth), sin(zenith) sin(azimuth)), i.e. the wavenumber
    // divided by 2*pi/lambda.
    std::array<double, 2> angle_to_wavenumber(double azimuth, double zenith);

    // All points (p_x / D_x, p_y / D_y), p in Z^2, inside the closed unit disk.
    // Order: p_y ascending, then p_x ascending.
    std::vector<std::array<int, 2>> wavenumber_lattice(const Aperture &aperture);

    // Nyquist-rate directions of one cluster side: lattice points that fall in
    // the cluster's projected support. A point support snaps to the nearest
    // lattice point. May be empty.
    std::vector<DirectionSample> sample_cluster_directions(const AngularSupport &support, const Aperture &aperture);
    std::vector<DirectionSample> sample_cluster_directions(const Cluster &cluster, const Aperture &aperture, Side side);

    struct ChannelRealization
    {
        std::vector<CMatrix> A_t; // per cluster: d_t x (M N_t)
        std::vector<CMatrix> A_r; // per cluster: d_r x (N N_r)
        std::vector<CMatrix> H_a; // per cluster: d_r x d_t
        std::vector<std::vector<DirectionSample>> departures;
        std::vector<std::vector<DirectionSample>> arrivals;
        CMatrix H_w; // (N N_r) x (M N_t)
        std::uint64_t seed = 0;

        std::size_t cluster_count() const { return H_a.size(); }

        // H_w rebuilt from the stored per-cluster factors.
        CMatrix reassemble() const;

        // Small matrix with exactly the nonzero singular values of H_w,
        // obtained by QR-compressing the stacked array responses.
        CMatrix spectral_core() const;
    };

    // Responses follow exp(-j 2 pi <position, wavenumber>); the stored A
    // matrices hold their conjugates so that H_w = sum A_r^H H_a A_t / sqrt(L).
    // Scattering gains are i.i.d. CN(0, 1) drawn from the channel stream of `seed`.
    ChannelRealization generate_channel(const ClusterSet &clusters,
                                        const ElementLayout &tx, const ElementLayout &rx,
                                        const Aperture &tx_aperture, const Aperture &rx_aperture,
                                        std::uint64_t seed);

    ChannelRealization generate_channel(const ClusterSet &clusters,
                                        const ArrayConfig &tx, const ArrayConfig &rx,
                                        std::uint64_t seed);
}
