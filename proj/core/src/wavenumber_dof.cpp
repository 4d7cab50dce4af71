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

#include "darisa/wavenumber_dof.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace darisa
{
    namespace
    {
        // Grid over [lo, hi] plus every multiple of pi/2 inside it; the extrema of
        // |sin| and |cos| over an interval sit at endpoints or at those points.
        std::vector<double> sample_interval(double lo, double hi, int points)
        {
            std::vector<double> out;
            if (hi <= lo || points < 2)
            {
                out.push_back(lo);
                return out;
            }
            out.reserve(std::size_t(points) + 8);
            for (int i = 0; i < points; ++i)
                out.push_back(lo + (hi - lo) * double(i) / double(points - 1));
            const double quarter = kPi / 2.0;
            for (double k = std::ceil(lo / quarter); k * quarter <= hi; k += 1.0)
                out.push_back(k * quarter);
            return out;
        }
    }

    SupportEllipse support_ellipse(const ClusterSet &clusters, Side side, const EllipseGrid &grid)
    {
        clusters.validate();
        SupportEllipse e;
        for (const auto &cluster : clusters.clusters)
        {
            const auto &s = cluster.support(side);
            const double spread_az = std::min(s.spread_azimuth, kPi);
            const auto azimuths = sample_interval(s.center_azimuth - spread_az, s.center_azimuth + spread_az, grid.azimuth_points);
            const double zen_lo = std::max(0.0, s.center_zenith - s.spread_zenith);
            const double zen_hi = std::min(kPi, s.center_zenith + s.spread_zenith);
            const auto zeniths = sample_interval(zen_lo, std::max(zen_lo, zen_hi), grid.zenith_points);

            double max_sin_zen = 0.0;
            for (double z : zeniths)
                max_sin_zen = std::max(max_sin_zen, std::abs(std::sin(z)));
            double max_cos_az = 0.0, max_sin_az = 0.0;
            for (double a : azimuths)
            {
                max_cos_az = std::max(max_cos_az, std::abs(std::cos(a)));
                max_sin_az = std::max(max_sin_az, std::abs(std::sin(a)));
            }
            // |sin(zen) cos(az)| is separable, so the grid maximum factorizes
            e.c1 = std::max(e.c1, max_sin_zen * max_cos_az);
            e.c2 = std::max(e.c2, max_sin_zen * max_sin_az);
        }
        e.c1 = std::clamp(e.c1, 0.0, 1.0);
        e.c2 = std::clamp(e.c2, 0.0, 1.0);
        return e;
    }

    DofPrediction lemma1_dof(const Aperture &aperture_t, const Aperture &aperture_r,
                             const SupportEllipse &ellipse_t, const SupportEllipse &ellipse_r)
    {
        if (!(aperture_t.x > 0.0) || !(aperture_t.y > 0.0) || !(aperture_r.x > 0.0) || !(aperture_r.y > 0.0))
            fail(ErrorKind::invalid_argument, "apertures must be positive");
        DofPrediction p;
        p.d_t = ellipse_t.c1 * ellipse_t.c2 * kPi * aperture_t.x * aperture_t.y;
        p.d_r = ellipse_r.c1 * ellipse_r.c2 * kPi * aperture_r.x * aperture_r.y;
        p.lemma1_dof = std::min(p.d_r, p.d_t);
        return p;
    }

    int theorem1_dof(int K, int N, int M, double d_t, double d_r)
    {
        if (K < 1 || N < 1 || M < 1)
            fail(ErrorKind::invalid_argument, "K, N and M must be at least 1");
        const auto floor_dof = [](double d) { return int(std::floor(std::max(0.0, d) + 1e-9)); };
        return std::min({K * N, M, floor_dof(d_t), floor_dof(d_r)});
    }

    DofPrediction predict_dof(const ArrayConfig &tx, const ArrayConfig &rx, const ClusterSet &clusters, int K,
                              const EllipseGrid &grid)
    {
        tx.validate();
        rx.validate();
        auto p = lemma1_dof(array_aperture(tx), array_aperture(rx),
                            support_ellipse(clusters, Side::transmit, grid),
                            support_ellipse(clusters, Side::receive, grid));
        p.theorem1_dof = theorem1_dof(K, rx.darisa_count, tx.darisa_count, p.d_t, p.d_r);
        return p;
    }

    std::size_t lattice_cardinality(const Aperture &aperture)
    {
        return wavenumber_lattice(aperture).size();
    }
}
