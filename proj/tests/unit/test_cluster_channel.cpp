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

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "darisa/cluster_channel.hpp"
#include "darisa/metrics.hpp"
#include "support/oracles.hpp"

using namespace darisa;

namespace
{
    Cluster cone(double az_center, double az_spread, double zen_center = kPi / 2, double zen_spread = kPi / 2)
    {
        AngularSupport s{az_center, zen_center, az_spread, zen_spread};
        return Cluster{s, s};
    }
}

TEST(AngleToWavenumber, Examples)
{
    auto k = angle_to_wavenumber(0.0, 0.0);
    EXPECT_NEAR(k[0], 0.0, 1e-15);
    EXPECT_NEAR(k[1], 0.0, 1e-15);
    k = angle_to_wavenumber(0.0, kPi / 2);
    EXPECT_NEAR(k[0], 1.0, 1e-15);
    EXPECT_NEAR(k[1], 0.0, 1e-15);
    k = angle_to_wavenumber(kPi / 4, kPi / 2);
    EXPECT_NEAR(k[0], std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(k[1], std::sqrt(0.5), 1e-15);
}

TEST(SampleDirections, IsotropicMatchesLatticeEnumeration)
{
    const Cluster iso = Cluster::isotropic();
    EXPECT_EQ(sample_cluster_directions(iso, {4, 4}, Side::transmit).size(), 49u);
    EXPECT_EQ(sample_cluster_directions(iso, {1, 1}, Side::receive).size(), 5u);
    for (double D : {1.0, 1.5, 2.0, 3.0, 4.0, 5.5})
        for (double Dy : {1.0, 2.0, 3.5})
            EXPECT_EQ(int(sample_cluster_directions(iso, {D, Dy}, Side::transmit).size()), oracle::lattice_count(D, Dy))
                << D << " x " << Dy;
}

TEST(SampleDirections, UnitAperturePoints)
{
    const auto s = sample_cluster_directions(Cluster::isotropic(), {1, 1}, Side::transmit);
    std::set<std::pair<int, int>> got;
    for (const auto &d : s)
    {
        got.insert({d.lattice[0], d.lattice[1]});
        EXPECT_LE(std::hypot(d.wavenumber_xy[0], d.wavenumber_xy[1]), 1.0 + 1e-12);
    }
    const std::set<std::pair<int, int>> want{{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    EXPECT_EQ(got, want);
}

TEST(SampleDirections, PointClusterSnapsToOneSample)
{
    const AngularSupport point{0.0, kPi / 2, 0.0, 0.0};
    const auto s = sample_cluster_directions(point, {4, 4});
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0].lattice[0], 4);
    EXPECT_EQ(s[0].lattice[1], 0);
}

TEST(SampleDirections, SamplesLieInsideSupport)
{
    const Cluster c = cone(kPi, kPi / 6);
    for (const auto &d : sample_cluster_directions(c, {4, 4}, Side::receive))
    {
        const auto k = angle_to_wavenumber(d.azimuth, d.zenith);
        EXPECT_NEAR(k[0], d.wavenumber_xy[0], 1e-12);
        EXPECT_NEAR(k[1], d.wavenumber_xy[1], 1e-12);
        EXPECT_NEAR(d.wavenumber_xy[0], d.lattice[0] / 4.0, 1e-12);
        EXPECT_NEAR(d.wavenumber_xy[1], d.lattice[1] / 4.0, 1e-12);
    }
}

TEST(SampleDirections, CountNonDecreasingInAperture)
{
    {
        const Cluster c = Cluster::isotropic();
        std::size_t prev = 0;
        for (double D = 0.5; D <= 6.0; D += 0.25)
        {
            const auto n = sample_cluster_directions(c, {D, 2.0}, Side::transmit).size();
            EXPECT_GE(n, prev);
            prev = n;
        }
        prev = 0;
        for (double D = 0.5; D <= 6.0; D += 0.25)
        {
            const auto n = sample_cluster_directions(c, {2.0, D}, Side::transmit).size();
            EXPECT_GE(n, prev);
            prev = n;
        }
    }
}

TEST(GenerateChannel, ScalarChain)
{
    const ArrayConfig one{Side::transmit, 1, 1, 0.5, 1};
    ArrayConfig one_rx = one;
    one_rx.side = Side::receive;
    const AngularSupport point{0.0, 0.0, 0.0, 0.0};
    ClusterSet cs{{Cluster{point, point}}};
    const auto ch = generate_channel(cs, one, one_rx, 5);
    ASSERT_EQ(ch.H_w.rows(), 1);
    ASSERT_EQ(ch.H_w.cols(), 1);
    ASSERT_EQ(ch.H_a.size(), 1u);
    EXPECT_NEAR(std::abs(ch.H_w(0, 0)), std::abs(ch.H_a[0](0, 0)), 1e-14);
}

TEST(GenerateChannel, DeterministicAndSeedSensitive)
{
    const ArrayConfig tx{Side::transmit, 4, 4, 0.25, 2}, rx{Side::receive, 4, 4, 0.25, 1};
    const ClusterSet cs{{Cluster::isotropic()}};
    const auto a = generate_channel(cs, tx, rx, 99), b = generate_channel(cs, tx, rx, 99);
    EXPECT_TRUE(a.H_w == b.H_w);
    const auto c = generate_channel(cs, tx, rx, 100);
    EXPECT_FALSE(a.H_w == c.H_w);
}

TEST(GenerateChannel, UnitModulusResponsesAndReassembly)
{
    const ArrayConfig tx{Side::transmit, 4, 3, 0.25, 2}, rx{Side::receive, 3, 3, 0.3, 2};
    const ClusterSet cs{{cone(kPi / 3, kPi / 6), cone(4.0, kPi / 3, 1.2, 0.9)}};
    const auto ch = generate_channel(cs, tx, rx, 3);
    ASSERT_EQ(ch.cluster_count(), 2u);
    for (const auto *set : {&ch.A_t, &ch.A_r})
        for (const auto &A : *set)
            for (Eigen::Index i = 0; i < A.size(); ++i)
                ASSERT_NEAR(std::abs(A(i)), 1.0, 1e-12);
    EXPECT_LT((ch.reassemble() - ch.H_w).norm(), 1e-12 * std::max(1.0, ch.H_w.norm()));

    // Eq. of the realization written out directly
    CMatrix direct = CMatrix::Zero(ch.H_w.rows(), ch.H_w.cols());
    for (std::size_t l = 0; l < 2; ++l)
        direct += ch.A_r[l].adjoint() * ch.H_a[l] * ch.A_t[l];
    direct /= std::sqrt(2.0);
    EXPECT_LT((direct - ch.H_w).norm(), 1e-12 * ch.H_w.norm());
}

TEST(GenerateChannel, ResponsePhasesFollowPositions)
{
    const ArrayConfig tx{Side::transmit, 3, 2, 0.25, 1}, rx{Side::receive, 2, 2, 0.5, 1};
    const ClusterSet cs{{Cluster::isotropic()}};
    const auto ch = generate_channel(cs, tx, rx, 1);
    const auto layout = element_positions(tx);
    for (std::size_t g = 0; g < ch.departures[0].size(); ++g)
    {
        const auto &d = ch.departures[0][g];
        for (std::size_t u = 0; u < layout.size(); ++u)
        {
            const double arg = -2.0 * kPi * (layout.positions[u][0] * d.wavenumber_xy[0] +
                                              layout.positions[u][1] * d.wavenumber_xy[1]);
            // the stored A holds the conjugate response
            const cplx want = std::conj(std::polar(1.0, arg));
            EXPECT_LT(std::abs(ch.A_t[0](Eigen::Index(g), Eigen::Index(u)) - want), 1e-12);
        }
    }
}

TEST(GenerateChannel, TranslationLeavesSpectrumUnchanged)
{
    const ArrayConfig tx{Side::transmit, 4, 4, 0.25, 1}, rx{Side::receive, 4, 4, 0.25, 1};
    const ClusterSet cs{{cone(kPi, kPi / 2)}};
    auto lt = element_positions(tx), lr = element_positions(rx);
    const auto base = generate_channel(cs, lt, lr, array_aperture(tx), array_aperture(rx), 8);
    for (auto &p : lt.positions)
        p[0] += 3.7, p[1] -= 1.3;
    for (auto &p : lr.positions)
        p[0] -= 0.9, p[1] += 2.2;
    const auto moved = generate_channel(cs, lt, lr, array_aperture(tx), array_aperture(rx), 8);
    const Eigen::BDCSVD<CMatrix> a(base.H_w), b(moved.H_w);
    EXPECT_LT((a.singularValues() - b.singularValues()).norm(), 1e-9 * a.singularValues()(0));
}

TEST(GenerateChannel, IsotropicFourWavelengthRank)
{
    const ArrayConfig tx{Side::transmit, 16, 16, 0.25, 1}, rx{Side::receive, 16, 16, 0.25, 1};
    const auto ch = generate_channel(ClusterSet{{Cluster::isotropic()}}, tx, rx, 2024);
    const int rank = spectrum(ch.H_w).numerical_rank;
    EXPECT_GE(rank, 45);
    EXPECT_LE(rank, 60);
}

TEST(GenerateChannel, SpectralCoreKeepsSingularValues)
{
    const ArrayConfig tx{Side::transmit, 6, 6, 0.25, 1}, rx{Side::receive, 5, 5, 0.25, 1};
    const auto ch = generate_channel(ClusterSet{{Cluster::isotropic()}}, tx, rx, 4);
    const Eigen::BDCSVD<CMatrix> full(ch.H_w), core(ch.spectral_core());
    const auto n = std::min(full.singularValues().size(), core.singularValues().size());
    EXPECT_LT((full.singularValues().head(n) - core.singularValues().head(n)).norm(), 1e-9 * full.singularValues()(0));
}

TEST(GenerateChannel, DegenerateClusterRejected)
{
    // a half-wavelength aperture only has the broadside lattice point, outside this support
    const AngularSupport narrow{0.3, 0.7, 0.01, 0.01};
    const ClusterSet cs{{Cluster{narrow, narrow}}};
    const ArrayConfig one{Side::transmit, 1, 1, 0.5, 1};
    ArrayConfig one_rx = one;
    one_rx.side = Side::receive;
    try
    {
        generate_channel(cs, one, one_rx, 1);
        FAIL() << "expected a degenerate cluster error";
    }
    catch (const Error &e)
    {
        EXPECT_EQ(e.kind(), ErrorKind::degenerate_cluster);
    }
}

TEST(ClusterSet, PowerNormalization)
{
    ClusterSet cs{{Cluster::isotropic(), Cluster::isotropic(), Cluster::isotropic(), Cluster::isotropic()}};
    EXPECT_DOUBLE_EQ(cs.power_normalization(), 0.5);
    EXPECT_THROW(ClusterSet{}.validate(), Error);
}
