// Copyright 2026 The vocabplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vocabplan/core/grid.hpp"

#include <cmath>

namespace vocabplan
{

GridPoint world_to_grid(const Vec2 & p, const BevGridSpec & spec)
{
  return {(p.x + 0.5 * spec.extent_x) / spec.cell_size_x(),
          (p.y + 0.5 * spec.extent_y) / spec.cell_size_y()};
}

Vec2 grid_to_world(const GridPoint & g, const BevGridSpec & spec)
{
  return {g.u * spec.cell_size_x() - 0.5 * spec.extent_x,
          g.v * spec.cell_size_y() - 0.5 * spec.extent_y};
}

Vec2 cell_center(int u, int v, const BevGridSpec & spec)
{
  return grid_to_world({u + 0.5, v + 0.5}, spec);
}

std::optional<CellIndex> cell_of(const Vec2 & p, const BevGridSpec & spec)
{
  const GridPoint g = world_to_grid(p, spec);
  if (!std::isfinite(g.u) || !std::isfinite(g.v)) {
    return std::nullopt;
  }
  const double fu = std::floor(g.u);
  const double fv = std::floor(g.v);
  if (fu < 0.0 || fv < 0.0 || fu >= spec.cells_x || fv >= spec.cells_y) {
    return std::nullopt;
  }
  return CellIndex{static_cast<int>(fu), static_cast<int>(fv)};
}

bool is_drivable(const DrivableMask & mask, const BevGridSpec & spec, const Vec2 & p)
{
  const auto cell = cell_of(p, spec);
  if (!cell) {
    return true;
  }
  return mask.at(cell->u, cell->v);
}

}  // namespace vocabplan
