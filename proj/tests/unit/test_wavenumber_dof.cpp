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

#include <algorithm>
#include <cmath>

#include "darisa/rng.hpp"
#include "darisa/wavenumber_dof.hpp"
#include "support/oracles.hpp"

using namespace darisa;

namespace
{
    ClusterSet single(double az_c, double az_s, double zen_c, double zen_s)
    {
        const AngularSupport s{az_c, zen_c, az_s, zen_s};
        return ClusterSet{{Cluster{s, s}}};
    }

    // joint grid maximum of the projected extents
    std::pair<double, double> extents_by_grid(const AngularSupport &s)
    {
        double c1 = 0.0, c2 = 0.0;
        const int n = 1500;
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j)
            {
                const double az = s.center_azimuth - s.spread_azimuth + 2.0 * s.spread_azimuth * i / n;
                const double zen = std::clamp(s.center_zenith - s.spread_zenith + 2.0 * s.spread_zenith * j / n, 0.0, kPi);
                c1 = std::max(c1, std::abs(std::sin(zen) * std::cos(az)));
                c2 = std::max(c2, std::abs(std::sin(zen) * std::sin(az)));
            }
        return {c1, c2};
    }
}

TEST(SupportEllipse, IsotropicIsUnitDisk)
{
    const auto e = support_ellipse(ClusterSet{{Cluster::isotropic()}}, Side::transmit);
    EXPECT_NEAR(e.c1, 1.0, 1e-12);
    EXPECT_NEAR(e.c2, 1.0, 1e-12);
}

TEST(SupportEllipse, NarrowAzimuthAroundPi)
{
    const double spread = 15.0 * kPi / 180.0;
    const auto cs = single(kPi, spread, kPi / 2, kPi / 2);
    const auto e = support_ellipse(cs, Side::receive);
    const auto [g1, g2] = extents_by_grid(cs.clusters[0].arrival);
    EXPECT_NEAR(e.c1, 1.0, 1e-9);
    EXPECT_NEAR(e.c2, std::sin(spread), 1e-6);
    EXPECT_NEAR(e.c1, g1, 1e-5);
    EXPECT_NEAR(e.c2, g2, 1e-5);
}

TEST(SupportEllipse, PointCluster)
{
    const auto e = support_ellipse(single(0.0, 0.0, kPi / 2, 0.0), Side::transmit);
    EXPECT_NEAR(e.c1, 1.0, 1e-12);
    EXPECT_NEAR(e.c2, 0.0, 1e-12);
}

TEST(SupportEllipse, MatchesJointGridOnRandomSupports)
{
    CounterRng rng(5, Stream::test);
    for (int t = 0; t < 10; ++t)
    {
        const AngularSupport s{rng.uniform() * kTwoPi, rng.uniform() * kPi, rng.uniform() * kPi, rng.uniform() * kPi / 2};
        const auto e = support_ellipse(ClusterSet{{Cluster{s, s}}}, Side::transmit);
        const auto [g1, g2] = extents_by_grid(s);
        EXPECT_NEAR(e.c1, g1, 5e-5);
        EXPECT_NEAR(e.c2, g2, 5e-5);
    }
}

TEST(SupportEllipse, MonotoneInSpread)
{
    double prev1 = 0.0, prev2 = 0.0;
    for (double deg = 0.0; deg <= 180.0; deg += 7.5)
    {
        const auto e = support_ellipse(single(2.0, deg * kPi / 180.0, 1.2, 0.3), Side::transmit);
        EXPECT_GE(e.c1, prev1 - 1e-12);
        EXPECT_GE(e.c2, prev2 - 1e-12);
        prev1 = e.c1;
        prev2 = e.c2;
    }
}

TEST(ApertureDof, IsotropicApertures)
{
    const SupportEllipse iso{1.0, 1.0};
    auto p = lemma1_dof({4, 4}, {4, 4}, iso, iso);
    EXPECT_NEAR(p.d_t, 16.0 * kPi, 1e-12);
    EXPECT_NEAR(p.lemma1_dof, 50.27, 5e-3);
    p = lemma1_dof({8, 8}, {8, 8}, iso, iso);
    EXPECT_NEAR(p.lemma1_dof, 201.06, 5e-3);
    p = lemma1_dof({4, 4}, {2, 3}, iso, iso);
    EXPECT_NEAR(p.lemma1_dof, 6.0 * kPi, 1e-12);
}

TEST(ApertureDof, EmptySupport)
{
    const SupportEllipse none{0.0, 0.0};
    EXPECT_EQ(lemma1_dof({4, 4}, {4, 4}, none, none).lemma1_dof, 0.0);
}

TEST(CompositeDof, Examples)
{
    EXPECT_EQ(theorem1_dof(4, 2, 8, 50, 50), 8);
    EXPECT_EQ(theorem1_dof(1, 2, 8, 50, 50), 2);
    EXPECT_EQ(theorem1_dof(2, 2, 8, 3, 3), 3);
    EXPECT_EQ(theorem1_dof(3, 2, 8, 3.14, 12.57), 3);
}

TEST(CompositeDof, MonotoneAndSaturatingInK)
{
    for (int N : {1, 2, 3})
        for (int M : {2, 4, 8})
            for (double d : {2.5, 5.0, 50.0})
            {
                int prev = 0;
                for (int K = 1; K <= 12; ++K)
                {
                    const int v = theorem1_dof(K, N, M, d, d + 1.0);
                    EXPECT_GE(v, prev);
                    EXPECT_LE(v, std::min(K * N, M));
                    EXPECT_LE(v, int(std::floor(d)));
                    if (K * N >= std::min(M, int(std::floor(d))))
                        EXPECT_EQ(v, std::min(M, int(std::floor(d))));
                    prev = v;
                }
            }
}

TEST(PredictDof, UsesDarisaApertureAndCounts)
{
    const ArrayConfig tx{Side::transmit, 4, 4, 0.25, 8}, rx{Side::receive, 4, 4, 0.25, 2};
    const auto p = predict_dof(tx, rx, ClusterSet{{Cluster::isotropic()}}, 4);
    EXPECT_NEAR(p.d_t, kPi * 8.0, 1e-9);
    EXPECT_NEAR(p.d_r, kPi * 2.0, 1e-9);
    EXPECT_EQ(p.theorem1_dof, 6);
}

TEST(LatticeCardinality, BruteForce)
{
    for (double dx = 0.5; dx <= 6.0; dx += 0.5)
        for (double dy = 0.5; dy <= 6.0; dy += 1.25)
            EXPECT_EQ(int(lattice_cardinality({dx, dy})), oracle::lattice_count(dx, dy));
}

TEST(LatticeCardinality, CloseToEllipseArea)
{
    for (double dx = 2.0; dx <= 10.0; dx += 0.5)
        for (double dy = 2.0; dy <= 10.0; dy += 1.5)
        {
            const double area = kPi * dx * dy;
            EXPECT_LT(std::abs(double(lattice_cardinality({dx, dy})) - area), 0.15 * area) << dx << " " << dy;
        }
}
