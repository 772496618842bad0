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

#ifndef VOCABPLAN__CORE__KINEMATICS_HPP_
#define VOCABPLAN__CORE__KINEMATICS_HPP_

#include "vocabplan/core/geometry.hpp"
#include "vocabplan/core/types.hpp"

#include <array>

namespace vocabplan
{

/// Finite-difference motion profile of a trajectory.
///
/// The ego origin (0, 0) at t = 0 precedes waypoint 0, so segment k runs from
/// the previous position to waypoint k. Speeds come from the 8 segments, the 7
/// accelerations from consecutive segment velocities, the 6 jerks from
/// consecutive accelerations. Longitudinal / lateral components are taken in
/// the heading frame of the later waypoint. `history_accel` compares the first
/// segment with the current ego velocity.
struct KinematicProfile
{
  std::array<Vec2, kHorizonSteps> velocity{};
  std::array<double, kHorizonSteps> speed{};
  std::array<Vec2, kHorizonSteps - 1> accel{};
  std::array<double, kHorizonSteps - 1> accel_lon{};
  std::array<double, kHorizonSteps - 1> accel_lat{};
  std::array<Vec2, kHorizonSteps - 2> jerk{};
  std::array<double, kHorizonSteps - 2> jerk_magnitude{};
  Vec2 history_accel{};
  double history_accel_lon{0.0};
  double history_accel_lat{0.0};
};

KinematicProfile kinematics(const Trajectory & traj, const EgoState & ego);

/// Ego rectangle at waypoint `step`. Throws std::out_of_range for step >= 8.
OrientedBox ego_footprint(const Trajectory & traj, const EgoState & ego, std::size_t step);

/// Position preceding waypoint `step` (the ego origin for step 0).
Vec2 previous_position(const Trajectory & traj, std::size_t step);

}  // namespace vocabplan

#endif  // VOCABPLAN__CORE__KINEMATICS_HPP_
