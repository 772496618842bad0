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

#include "vocabplan/core/kinematics.hpp"

#include <cmath>
#include <stdexcept>

namespace vocabplan
{

namespace
{

// Components of v in the frame of heading theta.
Vec2 to_heading_frame(const Vec2 & v, double theta)
{
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c * v.x + s * v.y, -s * v.x + c * v.y};
}

}  // namespace

Vec2 previous_position(const Trajectory & traj, std::size_t step)
{
  return step == 0 ? Vec2{} : traj.waypoints[step - 1].position();
}

KinematicProfile kinematics(const Trajectory & traj, const EgoState & ego)
{
  const double dt = Trajectory::dt;
  KinematicProfile out;
  for (std::size_t k = 0; k < kHorizonSteps; ++k) {
    out.velocity[k] = (traj.waypoints[k].position() - previous_position(traj, k)) / dt;
    out.speed[k] = out.velocity[k].norm();
  }
  for (std::size_t k = 0; k + 1 < kHorizonSteps; ++k) {
    out.accel[k] = (out.velocity[k + 1] - out.velocity[k]) / dt;
    const Vec2 local = to_heading_frame(out.accel[k], traj.waypoints[k + 1].theta);
    out.accel_lon[k] = local.x;
    out.accel_lat[k] = local.y;
  }
  for (std::size_t k = 0; k + 2 < kHorizonSteps; ++k) {
    out.jerk[k] = (out.accel[k + 1] - out.accel[k]) / dt;
    out.jerk_magnitude[k] = out.jerk[k].norm();
  }
  // Ego velocity is expressed in the ego frame at t = 0 (heading 0).
  out.history_accel = (out.velocity[0] - ego.velocity) / dt;
  const Vec2 local = to_heading_frame(out.history_accel, traj.waypoints[0].theta);
  out.history_accel_lon = local.x;
  out.history_accel_lat = local.y;
  return out;
}

OrientedBox ego_footprint(const Trajectory & traj, const EgoState & ego, std::size_t step)
{
  if (step >= kHorizonSteps) {
    throw std::out_of_range("ego_footprint: step index out of range");
  }
  const Waypoint & w = traj.waypoints[step];
  return OrientedBox{w.position(), w.theta, ego.length, ego.width};
}

}  // namespace vocabplan
