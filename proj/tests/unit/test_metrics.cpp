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

#include "darisa/metrics.hpp"
#include "darisa/rng.hpp"
#include "support/oracles.hpp"

using namespace darisa;

namespace
{
    CMatrix random_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed)
    {
        CounterRng rng(seed, Stream::test);
        CMatrix m(r, c);
        for (Eigen::Index i = 0; i < m.size(); ++i)
            m(i) = rng.complex_normal();
        return m;
    }
}

TEST(Spectrum, Identity)
{
    const auto s = spectrum(CMatrix::Identity(4, 4));
    EXPECT_EQ(s.numerical_rank, 4);
    EXPECT_NEAR(s.edof, 4.0, 1e-12);
    EXPECT_NEAR(s.condition_number, 1.0, 1e-12);
    EXPECT_FALSE(s.degenerate);
}

TEST(Spectrum, RankOneOuterProduct)
{
    const CMatrix u = random_matrix(5, 1, 1), v = random_matrix(3, 1, 2);
    const auto s = spectrum(u * v.adjoint());
    EXPECT_EQ(s.numerical_rank, 1);
    EXPECT_NEAR(s.edof, 1.0, 1e-9);
}

TEST(Spectrum, KnownSingularValues)
{
    RVector sv(2);
    sv << std::sqrt(2.0), 1.0;
    EXPECT_NEAR(edof_from_singular_values(sv), 1.8, 1e-12);
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 0) = std::sqrt(2.0);
    m(1, 1) = 1.0;
    EXPECT_NEAR(spectrum(m).edof, 1.8, 1e-12);
    EXPECT_NEAR(edof(m), 1.8, 1e-12);
    EXPECT_NEAR(spectrum(m).condition_number, 2.0, 1e-12);
}

TEST(Spectrum, ZeroMatrixIsDegenerate)
{
    const auto s = spectrum(CMatrix::Zero(3, 2));
    EXPECT_TRUE(s.degenerate);
    EXPECT_EQ(s.numerical_rank, 0);
    EXPECT_EQ(s.edof, 0.0);
}

TEST(Spectrum, RejectsBadInput)
{
    EXPECT_THROW(spectrum(CMatrix(0, 0)), Error);
    EXPECT_THROW(spectrum(CMatrix::Identity(2, 2), 0.0), Error);
    EXPECT_THROW(spectrum(CMatrix::Identity(2, 2), 1.0), Error);
}

TEST(Spectrum, ThresholdIsRelative)
{
    CMatrix m = CMatrix::Zero(3, 3);
    m(0, 0) = 1.0;
    m(1, 1) = 2e-3;
    m(2, 2) = 5e-4;
    EXPECT_EQ(spectrum(m).numerical_rank, 2);
    EXPECT_EQ(spectrum(1e6 * m).numerical_rank, 2);
    EXPECT_EQ(spectrum(m, 1e-4).numerical_rank, 3);
    // edof ignores the threshold
    EXPECT_NEAR(spectrum(m).edof, spectrum(m, 1e-4).edof, 1e-15);
}

TEST(Edof, MatchesDefinitionAndBounds)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        const CMatrix m = random_matrix(3 + Eigen::Index(seed % 4), 2 + Eigen::Index(seed % 5), seed);
        const auto s = spectrum(m);
        EXPECT_NEAR(s.edof, oracle::edof(m), 1e-10 * s.edof);
        EXPECT_NEAR(edof(m), oracle::edof(m), 1e-10 * s.edof);
        EXPECT_GE(s.edof, 1.0 - 1e-12);
        EXPECT_LE(s.edof, s.numerical_rank + 1e-12);
        EXPECT_NEAR(edof(-3.5 * m), s.edof, 1e-10 * s.edof);
        EXPECT_NEAR(edof(cplx(0.2, 1.7) * m), s.edof, 1e-10 * s.edof);
    }
}

TEST(Edof, EqualsRankIffEqualSingularValues)
{
    RVector equal = RVector::Constant(5, 2.5);
    EXPECT_NEAR(edof_from_singular_values(equal), 5.0, 1e-9);
    RVector uneven = equal;
    uneven(4) = 2.4;
    EXPECT_LT(edof_from_singular_values(uneven), 5.0 - 1e-9);
}

TEST(CapacityApprox, Examples)
{
    EXPECT_NEAR(capacity_edof_approx(1.0, 1.0), 1.0, 1e-15);
    EXPECT_NEAR(capacity_edof_approx(2.0, 2.0), 2.0, 1e-15);
    EXPECT_NEAR(capacity_edof_approx(3.0, 7.0), 3.0 * std::log2(10.0 / 3.0), 1e-12);
    EXPECT_EQ(capacity_edof_approx(0.0, 7.0), 0.0);
}

TEST(CapacityApprox, StrictlyIncreasingInEdof)
{
    for (double snr : {0.1, 1.0, 10.0, 100.0, 1e4})
    {
        double prev = capacity_edof_approx(0.01, snr);
        for (int i = 1; i <= 10000; ++i)
        {
            const double psi = 0.01 + (100.0 - 0.01) * i / 10000.0;
            const double v = capacity_edof_approx(psi, snr);
            ASSERT_GT(v, prev) << "psi " << psi << " snr " << snr;
            prev = v;
        }
    }
}

TEST(CapacityExact, Examples)
{
    EXPECT_EQ(capacity_exact(CMatrix::Zero(3, 3), 5.0), 0.0);
    for (int n : {1, 2, 5})
        EXPECT_NEAR(capacity_exact(CMatrix::Identity(n, n), 3.0), n * std::log2(1.0 + 3.0 / n), 1e-12);
    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 1.0;
    EXPECT_NEAR(capacity_exact(d, 2.0), std::log2(5.0) + 1.0, 1e-12);
}

TEST(CapacityExact, MatchesLogDet)
{
    const CMatrix m = random_matrix(4, 3, 3);
    const double snr = 5.0;
    const CMatrix g = CMatrix::Identity(4, 4) + (snr / 3.0) * m * m.adjoint();
    const double want = std::log2(std::abs(g.determinant()));
    EXPECT_NEAR(capacity_exact(m, snr), want, 1e-10);
}

TEST(CapacityExact, HighSnrAgreesForWellConditioned)
{
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
        // singular values in [1, 1.4] keep the condition number below 2
        const CMatrix q = random_matrix(4, 4, 50 + seed).householderQr().householderQ();
        const CMatrix p = random_matrix(4, 4, 80 + seed).householderQr().householderQ();
        RVector sv(4);
        CounterRng rng(seed, Stream::test);
        for (int i = 0; i < 4; ++i)
            sv(i) = 1.0 + 0.4 * rng.uniform();
        CMatrix m = q * sv.cast<cplx>().asDiagonal() * p;
        m *= 2.0 / m.norm();
        const auto s = spectrum(m);
        ASSERT_LT(s.condition_number, 2.0);
        const double exact = capacity_exact(m, 1e4);
        const double approx = capacity_edof_approx(s.edof, 1e4);
        EXPECT_LT(std::abs(exact - approx) / exact, 0.05);
    }
}
