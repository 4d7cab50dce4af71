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

#include "darisa/cluster_channel.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "darisa/rng.hpp"

namespace darisa
{
    namespace
    {
        constexpr double kAngleSlack = 1e-9;
        constexpr double kDiskSlack = 1e-12;

        // Wrap to (-pi, pi]
        double wrap_angle(double a)
        {
            a = std::remainder(a, kTwoPi);
            return a <= -kPi ? a + kTwoPi : a;
        }

        DirectionSample make_sample(int px, int py, const Aperture &aperture)
        {
            DirectionSample s;
            s.lattice = {px, py};
            s.wavenumber_xy = {px / aperture.x, py / aperture.y};
            const double rho = std::min(1.0, std::hypot(s.wavenumber_xy[0], s.wavenumber_xy[1]));
            s.zenith = std::asin(rho); // front hemisphere branch
            s.azimuth = rho > 0.0 ? std::atan2(s.wavenumber_xy[1], s.wavenumber_xy[0]) : 0.0;
            if (s.azimuth < 0.0)
                s.azimuth += kTwoPi;
            return s;
        }

        CMatrix response_matrix(const std::vector<DirectionSample> &dirs, const ElementLayout &layout)
        {
            CMatrix A(Eigen::Index(dirs.size()), Eigen::Index(layout.size()));
            for (std::size_t p = 0; p < dirs.size(); ++p)
                for (std::size_t e = 0; e < layout.size(); ++e)
                {
                    const auto &pos = layout.positions[e];
                    const double arg = kTwoPi * (pos[0] * dirs[p].wavenumber_xy[0] + pos[1] * dirs[p].wavenumber_xy[1]);
                    A(Eigen::Index(p), Eigen::Index(e)) = std::polar(1.0, arg);
                }
            return A;
        }

        void validate_support(const AngularSupport &s, const char *what)
        {
            auto finite = [](double v) { return std::isfinite(v); };
            if (!finite(s.center_azimuth) || !finite(s.center_zenith) || !finite(s.spread_azimuth) || !finite(s.spread_zenith))
                fail(ErrorKind::invalid_argument, std::string(what) + ": cluster angles must be finite");
            if (s.spread_azimuth < 0.0 || s.spread_zenith < 0.0)
                fail(ErrorKind::invalid_argument, std::string(what) + ": angular spreads must be non-negative");
        }
    }

    bool AngularSupport::contains(double azimuth, double zenith) const
    {
        if (zenith < center_zenith - spread_zenith - kAngleSlack || zenith > center_zenith + spread_zenith + kAngleSlack)
            return false;
        if (spread_azimuth >= kPi)
            return true;
        return std::abs(wrap_angle(azimuth - center_azimuth)) <= spread_azimuth + kAngleSlack;
    }

    Cluster Cluster::isotropic()
    {
        const AngularSupport full{kPi, kPi / 2.0, kPi, kPi / 2.0};
        return {full, full};
    }

    double ClusterSet::power_normalization() const
    {
        return clusters.empty() ? 0.0 : 1.0 / std::sqrt(double(clusters.size()));
    }

    void ClusterSet::validate() const
    {
        if (clusters.empty())
            fail(ErrorKind::invalid_argument, "cluster set must contain at least one cluster");
        for (const auto &c : clusters)
        {
            validate_support(c.departure, "departure");
            validate_support(c.arrival, "arrival");
        }
    }

    std::array<double, 2> angle_to_wavenumber(double azimuth, double zenith)
    {
        const double s = std::sin(zenith);
        return {s * std::cos(azimuth), s * std::sin(azimuth)};
    }

    std::vector<std::array<int, 2>> wavenumber_lattice(const Aperture &aperture)
    {
        if (!(aperture.x > 0.0) || !(aperture.y > 0.0))
            fail(ErrorKind::invalid_argument, "aperture dimensions must be positive");

        const int max_x = int(std::floor(aperture.x + kDiskSlack));
        const int max_y = int(std::floor(aperture.y + kDiskSlack));
        std::vector<std::array<int, 2>> points;
        for (int py = -max_y; py <= max_y; ++py)
            for (int px = -max_x; px <= max_x; ++px)
            {
                const double kx = px / aperture.x;
                const double ky = py / aperture.y;
                if (kx * kx + ky * ky <= 1.0 + kDiskSlack)
                    points.push_back({px, py});
            }
        return points;
    }

    std::vector<DirectionSample> sample_cluster_directions(const AngularSupport &support, const Aperture &aperture)
    {
        const auto lattice = wavenumber_lattice(aperture);
        std::vector<DirectionSample> out;

        if (support.is_point())
        {
            const auto target = angle_to_wavenumber(support.center_azimuth, support.center_zenith);
            const double tx = target[0] * aperture.x;
            const double ty = target[1] * aperture.y;
            double best = std::numeric_limits<double>::infinity();
            std::array<int, 2> nearest{0, 0};
            for (const auto &p : lattice)
            {
                const double d = std::hypot(p[0] - tx, p[1] - ty);
                if (d < best - 1e-12)
                {
                    best = d;
                    nearest = p;
                }
            }
            out.push_back(make_sample(nearest[0], nearest[1], aperture));
            return out;
        }

        for (const auto &p : lattice)
        {
            auto s = make_sample(p[0], p[1], aperture);
            const bool at_pole = p[0] == 0 && p[1] == 0;
            // At the pole every azimuth maps to the same point, so only zenith matters
            const bool inside = at_pole ? support.contains(support.center_azimuth, 0.0)
                                        : support.contains(s.azimuth, s.zenith);
            if (inside)
                out.push_back(s);
        }
        return out;
    }

    std::vector<DirectionSample> sample_cluster_directions(const Cluster &cluster, const Aperture &aperture, Side side)
    {
        return sample_cluster_directions(cluster.support(side), aperture);
    }

    CMatrix ChannelRealization::reassemble() const
    {
        if (H_a.empty())
            return CMatrix();
        const double scale = 1.0 / std::sqrt(double(H_a.size()));
        CMatrix H = CMatrix::Zero(A_r.front().cols(), A_t.front().cols());
        for (std::size_t l = 0; l < H_a.size(); ++l)
            H.noalias() += A_r[l].adjoint() * (H_a[l] * A_t[l]);
        return scale * H;
    }

    CMatrix ChannelRealization::spectral_core() const
    {
        if (H_a.empty())
            return CMatrix();

        Eigen::Index dr = 0, dt = 0;
        for (std::size_t l = 0; l < H_a.size(); ++l)
        {
            dr += H_a[l].rows();
            dt += H_a[l].cols();
        }
        const Eigen::Index n_rx = A_r.front().cols();
        const Eigen::Index n_tx = A_t.front().cols();

        CMatrix U(n_rx, dr);             // stacked A_r^H
        CMatrix Vh(n_tx, dt);            // stacked A_t^H
        CMatrix X = CMatrix::Zero(dr, dt); // block-diagonal scattering gains
        const double scale = 1.0 / std::sqrt(double(H_a.size()));
        Eigen::Index r0 = 0, c0 = 0;
        for (std::size_t l = 0; l < H_a.size(); ++l)
        {
            U.middleCols(r0, H_a[l].rows()) = A_r[l].adjoint();
            Vh.middleCols(c0, H_a[l].cols()) = A_t[l].adjoint();
            X.block(r0, c0, H_a[l].rows(), H_a[l].cols()) = scale * H_a[l];
            r0 += H_a[l].rows();
            c0 += H_a[l].cols();
        }

        // H_w = Q_u R_u X R_v^H Q_v^H with orthonormal Q_u, Q_v
        Eigen::HouseholderQR<CMatrix> qr_u(U);
        Eigen::HouseholderQR<CMatrix> qr_v(Vh);
        const Eigen::Index ku = std::min(n_rx, dr);
        const Eigen::Index kv = std::min(n_tx, dt);
        const CMatrix R_u = qr_u.matrixQR().topRows(ku).triangularView<Eigen::Upper>();
        const CMatrix R_v = qr_v.matrixQR().topRows(kv).triangularView<Eigen::Upper>();
        return R_u * X * R_v.adjoint();
    }

    ChannelRealization generate_channel(const ClusterSet &clusters,
                                        const ElementLayout &tx, const ElementLayout &rx,
                                        const Aperture &tx_aperture, const Aperture &rx_aperture,
                                        std::uint64_t seed)
    {
        clusters.validate();
        if (tx.size() == 0 || rx.size() == 0)
            fail(ErrorKind::invalid_argument, "element layouts must be nonempty");

        ChannelRealization ch;
        ch.seed = seed;
        for (std::size_t l = 0; l < clusters.size(); ++l)
        {
            auto dep = sample_cluster_directions(clusters.clusters[l], tx_aperture, Side::transmit);
            auto arr = sample_cluster_directions(clusters.clusters[l], rx_aperture, Side::receive);
            if (dep.empty() || arr.empty())
                fail(ErrorKind::degenerate_cluster,
                     "cluster " + std::to_string(l + 1) + " has no Nyquist sample on the " +
                         (dep.empty() ? "departure" : "arrival") + " side");

            CounterRng rng(seed, Stream::channel, std::uint32_t(l));
            CMatrix Ha(Eigen::Index(arr.size()), Eigen::Index(dep.size()));
            for (Eigen::Index p = 0; p < Ha.rows(); ++p)
                for (Eigen::Index q = 0; q < Ha.cols(); ++q)
                    Ha(p, q) = rng.complex_normal();

            ch.A_t.push_back(response_matrix(dep, tx));
            ch.A_r.push_back(response_matrix(arr, rx));
            ch.H_a.push_back(std::move(Ha));
            ch.departures.push_back(std::move(dep));
            ch.arrivals.push_back(std::move(arr));
        }
        ch.H_w = ch.reassemble();
        return ch;
    }

    ChannelRealization generate_channel(const ClusterSet &clusters,
                                        const ArrayConfig &tx, const ArrayConfig &rx,
                                        std::uint64_t seed)
    {
        return generate_channel(clusters, element_positions(tx), element_positions(rx),
                                array_aperture(tx), array_aperture(rx), seed);
    }
}
