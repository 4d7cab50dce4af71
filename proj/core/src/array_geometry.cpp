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

#include "darisa/array_geometry.hpp"

#include <string>

namespace darisa
{
    void ArrayConfig::validate() const
    {
        const std::string who = std::string(to_string(side)) + " array: ";
        if (n_x <= 0 || n_y <= 0)
            fail(ErrorKind::invalid_argument, who + "element counts must be positive");
        if (darisa_count <= 0)
            fail(ErrorKind::invalid_argument, who + "DARISA count must be positive");
        if (!(spacing > 0.0) || spacing > 0.5)
            fail(ErrorKind::invalid_argument, who + "spacing must lie in (0, 0.5] wavelengths");
    }

    ElementLayout element_positions(const ArrayConfig &cfg)
    {
        cfg.validate();

        const int per_darisa = cfg.elements_per_darisa();
        const double tile_offset = cfg.spacing * cfg.n_x;

        ElementLayout layout;
        layout.positions.reserve(std::size_t(cfg.total_elements()));
        layout.index_map.reserve(std::size_t(cfg.total_elements()));

        for (int d = 0; d < cfg.darisa_count; ++d)
            for (int local = 0; local < per_darisa; ++local)
            {
                const int x_idx = local % cfg.n_x;
                const int y_idx = local / cfg.n_x;
                layout.positions.push_back({d * tile_offset + x_idx * cfg.spacing, y_idx * cfg.spacing, 0.0});
                layout.index_map.push_back({d + 1, local + 1});
            }
        return layout;
    }
}
