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
#include <cstddef>
#include <vector>

#include "darisa/types.hpp"

namespace darisa
{
    // Planar metasurface array: `darisa_count` identical DARISAs of n_x by n_y
    // elements, tiled side by side along x. Lengths are in wavelengths.
    struct ArrayConfig
    {
        Side side = Side::transmit;
        int n_x = 1;          // elements per row
        int n_y = 1;          // elements per column
        double spacing = 0.5; // element pitch, (0, 0.5]
        int darisa_count = 1; // M on the transmit side, N on the receive side

        int elements_per_darisa() const { return n_x * n_y; }
        int total_elements() const { return darisa_count * n_x * n_y; }

        double darisa_aperture_x() const { return spacing * n_x; }
        double darisa_aperture_y() const { return spacing * n_y; }
        double array_aperture_x() const { return darisa_count * spacing * n_x; }
        double array_aperture_y() const { return spacing * n_y; }

        // Throws Error(invalid_argument) when counts or spacing are out of range.
        void validate() const;

        bool operator==(const ArrayConfig &) const = default;
    };

    // Aperture of a whole array, in wavelengths
    struct Aperture
    {
        double x = 0.0;
        double y = 0.0;
    };

    inline Aperture array_aperture(const ArrayConfig &cfg)
    {
        return {cfg.array_aperture_x(), cfg.array_aperture_y()};
    }

    struct ElementIndex
    {
        int darisa = 1; // 1-based DARISA index
        int local = 1;  // 1-based element index within the DARISA
    };

    struct ElementLayout
    {
        std::vector<std::array<double, 3>> positions; // normalized coordinates, z = 0
        std::vector<ElementIndex> index_map;          // global element -> (darisa, local)

        std::size_t size() const { return positions.size(); }
    };

    // Element positions in DARISA-major, row-major order. Global element
    // u (0-based) belongs to DARISA u / (n_x n_y) and local index u % (n_x n_y).
    ElementLayout element_positions(const ArrayConfig &cfg);
}
