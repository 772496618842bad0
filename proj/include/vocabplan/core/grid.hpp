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

#ifndef VOCABPLAN__CORE__GRID_HPP_
#define VOCABPLAN__CORE__GRID_HPP_

#include "vocabplan/core/types.hpp"

#include <optional>

namespace vocabplan
{

/// Continuous grid coordinates; cell (i, j) spans [i, i+1) x [j, j+1), centers at +0.5.
struct GridPoint
{
  double u{0.0};
  double v{0.0};
};

struct CellIndex
{
  int u{0};
  int v{0};
};

GridPoint world_to_grid(const Vec2 & p, const BevGridSpec & spec);
inline GridPoint world_to_grid(const Waypoint & p, const BevGridSpec & spec)
{
  return world_to_grid(p.position(), spec);
}
Vec2 grid_to_world(const GridPoint & g, const BevGridSpec & spec);

/// World position of the center of cell (u, v).
Vec2 cell_center(int u, int v, const BevGridSpec & spec);

/// Cell containing p, or nullopt when p lies outside the grid extent.
std::optional<CellIndex> cell_of(const Vec2 & p, const BevGridSpec & spec);

/// Drivable lookup; points outside the grid extent count as drivable.
bool is_drivable(const DrivableMask & mask, const BevGridSpec & spec, const Vec2 & p);

}  // namespace vocabplan

#endif  // VOCABPLAN__CORE__GRID_HPP_
