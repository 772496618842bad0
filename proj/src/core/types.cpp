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

#include "vocabplan/core/types.hpp"

#include "vocabplan/core/geometry.hpp"

#include <stdexcept>
#include <string>

namespace vocabplan
{

void validate_trajectory(const Trajectory & traj)
{
  for (std::size_t k = 0; k < kHorizonSteps; ++k) {
    const Waypoint & w = traj.waypoints[k];
    if (!std::isfinite(w.x) || !std::isfinite(w.y) || !std::isfinite(w.theta)) {
      throw std::invalid_argument("trajectory waypoint " + std::to_string(k) + " is not finite");
    }
    if (!(w.theta > -kPi && w.theta <= kPi)) {
      throw std::invalid_argument(
        "trajectory waypoint " + std::to_string(k) + " heading outside (-pi, pi]");
    }
  }
}

void validate_scene(const Scene & scene)
{
  if (scene.drivable.cells_x() != scene.grid.cells_x ||
      scene.drivable.cells_y() != scene.grid.cells_y) {
    throw std::invalid_argument("scene drivable mask does not match the BEV grid");
  }
  if (scene.route.points.size() < 2) {
    throw std::invalid_argument("scene route needs at least two points");
  }
  if (!(scene.route.reference_progress > 0.0)) {
    throw std::invalid_argument("scene reference_progress must be positive");
  }
  if (!(scene.ego.length > 0.0) || !(scene.ego.width > 0.0)) {
    throw std::invalid_argument("ego dimensions must be positive");
  }
  for (const auto & a : scene.agents) {
    if (!(a.w > 0.0) || !(a.h > 0.0)) {
      throw std::invalid_argument("agent dimensions must be positive");
    }
  }
  for (const auto & lane : scene.lanes) {
    if (lane.points.size() < 2) {
      throw std::invalid_argument("lane polyline needs at least two points");
    }
    if (lane.direction != 1 && lane.direction != -1) {
      throw std::invalid_argument("lane direction must be +1 or -1");
    }
  }
  validate_trajectory(scene.expert);
}

const char * to_string(RoadFamily family)
{
  switch (family) {
    case RoadFamily::straight:
      return "straight";
    case RoadFamily::curve_left:
      return "curve_left";
    case RoadFamily::curve_right:
      return "curve_right";
    case RoadFamily::t_intersection:
      return "t_intersection";
  }
  return "straight";
}

RoadFamily road_family_from_string(const std::string & name)
{
  if (name == "straight") return RoadFamily::straight;
  if (name == "curve_left") return RoadFamily::curve_left;
  if (name == "curve_right") return RoadFamily::curve_right;
  if (name == "t_intersection") return RoadFamily::t_intersection;
  throw std::invalid_argument("unknown road family: " + name);
}

}  // namespace vocabplan
