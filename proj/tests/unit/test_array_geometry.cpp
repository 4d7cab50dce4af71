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
#include <limits>

#include "darisa/array_geometry.hpp"

using namespace darisa;

namespace
{
    void expect_position(const ElementLayout &layout, int element, double x, double y)
    {
        const auto &p = layout.positions[std::size_t(element - 1)];
        EXPECT_NEAR(p[0], x, 1e-15);
        EXPECT_NEAR(p[1], y, 1e-15);
        EXPECT_EQ(p[2], 0.0);
    }
}

TEST(ElementPositions, FirstElementAtOrigin)
{
    const auto layout = element_positions({Side::transmit, 4, 4, 0.5, 1});
    expect_position(layout, 1, 0.0, 0.0);
}

TEST(ElementPositions, RowMajorWrap)
{
    const auto layout = element_positions({Side::transmit, 4, 4, 0.5, 1});
    expect_position(layout, 5, 0.0, 0.5);
}

TEST(ElementPositions, SecondDarisaOffsetAlongX)
{
    const ArrayConfig cfg{Side::receive, 2, 2, 0.25, 2};
    const auto layout = element_positions(cfg);
    expect_position(layout, 5, 0.5, 0.0);
    EXPECT_EQ(layout.index_map[4].darisa, 2);
    EXPECT_EQ(layout.index_map[4].local, 1);

    // enumeration by hand
    int u = 0;
    for (int d = 0; d < 2; ++d)
        for (int y = 0; y < 2; ++y)
            for (int x = 0; x < 2; ++x, ++u)
            {
                expect_position(layout, u + 1, 0.5 * d + 0.25 * x, 0.25 * y);
                EXPECT_EQ(layout.index_map[std::size_t(u)].darisa, d + 1);
                EXPECT_EQ(layout.index_map[std::size_t(u)].local, y * 2 + x + 1);
            }
}

TEST(ElementPositions, CountAndMinimumDistance)
{
    for (const ArrayConfig &cfg : {ArrayConfig{Side::transmit, 3, 5, 0.2, 3}, ArrayConfig{Side::receive, 4, 1, 0.5, 2},
                                   ArrayConfig{Side::receive, 6, 6, 0.125, 1}})
    {
        const auto layout = element_positions(cfg);
        ASSERT_EQ(layout.size(), std::size_t(cfg.total_elements()));
        double dmin = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < layout.size(); ++a)
            for (std::size_t b = a + 1; b < layout.size(); ++b)
            {
                const double dx = layout.positions[a][0] - layout.positions[b][0];
                const double dy = layout.positions[a][1] - layout.positions[b][1];
                dmin = std::min(dmin, std::hypot(dx, dy));
            }
        EXPECT_NEAR(dmin, cfg.spacing, 1e-12);
    }
}

TEST(ElementPositions, Deterministic)
{
    const ArrayConfig cfg{Side::transmit, 5, 3, 0.3, 2};
    const auto a = element_positions(cfg), b = element_positions(cfg);
    EXPECT_EQ(a.positions, b.positions);
}

TEST(ArrayConfig, ApertureCoversAllDarisas)
{
    const ArrayConfig cfg{Side::transmit, 16, 16, 0.125, 8};
    EXPECT_DOUBLE_EQ(cfg.darisa_aperture_x(), 2.0);
    EXPECT_DOUBLE_EQ(array_aperture(cfg).x, 16.0);
    EXPECT_DOUBLE_EQ(array_aperture(cfg).y, 2.0);
}

TEST(ArrayConfig, RejectsInvalid)
{
    EXPECT_THROW(element_positions({Side::transmit, 0, 4, 0.5, 1}), Error);
    EXPECT_THROW(element_positions({Side::transmit, 4, 4, 0.0, 1}), Error);
    EXPECT_THROW(element_positions({Side::transmit, 4, 4, 0.6, 1}), Error);
    EXPECT_THROW(element_positions({Side::transmit, 4, 4, 0.5, 0}), Error);
    try
    {
        element_positions({Side::transmit, 4, 4, -1.0, 1});
        FAIL();
    }
    catch (const Error &e)
    {
        EXPECT_EQ(e.kind(), ErrorKind::invalid_argument);
    }
}
