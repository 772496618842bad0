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

#ifndef VOCABPLAN__CORE__TYPES_HPP_
#define VOCABPLAN__CORE__TYPES_HPP_

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace vocabplan
{

inline constexpr std::size_t kHorizonSteps = 8;
inline constexpr double kStepSeconds = 0.5;
inline constexpr double kHorizonSeconds = kHorizonSteps * kStepSeconds;

inline constexpr double kDefaultEgoLength = 4.6;
inline constexpr double kDefaultEgoWidth = 1.9;

struct Vec2
{
  double x{0.0};
  double y{0.0};

  constexpr Vec2 operator+(const Vec2 & o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2 & o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr Vec2 & operator+=(const Vec2 & o)
  {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr bool operator==(const Vec2 &) const = default;

  constexpr double dot(const Vec2 & o) const { return x * o.x + y * o.y; }
  constexpr double cross(const Vec2 & o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
};

/// Ego-frame pose sample: x forward, y left, theta in (-pi, pi].
struct Waypoint
{
  double x{0.0};
  double y{0.0};
  double theta{0.0};

  constexpr Vec2 position() const { return {x, y}; }
  constexpr bool operator==(const Waypoint &) const = default;
};

/// Eight waypoints at 2 Hz covering 4 s, starting one step after the ego origin.
struct Trajectory
{
  std::array<Waypoint, kHorizonSteps> waypoints{};

  static constexpr double dt = kStepSeconds;

  constexpr bool operator==(const Trajectory &) const = default;
};

struct EgoState
{
  Vec2 velocity{};      // (longitudinal, lateral) m/s
  Vec2 acceleration{};  // (longitudinal, lateral) m/s^2
  double length{kDefaultEgoLength};
  double width{kDefaultEgoWidth};
};

/// Agent bounding box; w is the width, h the length along theta.
struct AgentBox
{
  double x{0.0};
  double y{0.0};
  double w{1.9};
  double h{4.6};
  double theta{0.0};
  double vx{0.0};
  double vy{0.0};

  Vec2 center() const { return {x, y}; }
  Vec2 velocity() const { return {vx, vy}; }
};

struct Lane
{
  std::vector<Vec2> points;
  // +1: traffic flows in polyline order, -1: against it.
  int direction{1};
};

struct Route
{
  std::vector<Vec2> points;
  double reference_progress{1.0};
};

enum class LightState { red, green };

struct TrafficLight
{
  Vec2 stop_a{};
  Vec2 stop_b{};
  LightState state{LightState::green};
};

/// Occupancy bitmask indexed [row v][column u]; u follows +x, v follows +y.
class DrivableMask
{
public:
  DrivableMask() = default;
  DrivableMask(int cells_x, int cells_y, bool fill = false)
  : cells_x_(cells_x), cells_y_(cells_y),
    cells_(static_cast<std::size_t>(cells_x) * static_cast<std::size_t>(cells_y), fill ? 1 : 0)
  {
  }

  int cells_x() const { return cells_x_; }
  int cells_y() const { return cells_y_; }
  bool in_bounds(int u, int v) const { return u >= 0 && v >= 0 && u < cells_x_ && v < cells_y_; }
  bool at(int u, int v) const { return cells_[index(u, v)] != 0; }
  void set(int u, int v, bool value) { cells_[index(u, v)] = value ? 1 : 0; }
  std::size_t count() const
  {
    std::size_t n = 0;
    for (auto c : cells_) n += c;
    return n;
  }
  bool operator==(const DrivableMask &) const = default;

private:
  std::size_t index(int u, int v) const
  {
    return static_cast<std::size_t>(v) * static_cast<std::size_t>(cells_x_) +
           static_cast<std::size_t>(u);
  }

  int cells_x_{0};
  int cells_y_{0};
  std::vector<std::uint8_t> cells_;
};

struct BevGridSpec
{
  int cells_x{128};
  int cells_y{128};
  double extent_x{64.0};
  double extent_y{64.0};

  double cell_size_x() const { return extent_x / cells_x; }
  double cell_size_y() const { return extent_y / cells_y; }
};

enum class RoadFamily { straight, curve_left, curve_right, t_intersection };

struct Scene
{
  std::string id;
  RoadFamily family{RoadFamily::straight};
  BevGridSpec grid{};
  DrivableMask drivable{128, 128};
  std::vector<Lane> lanes;
  Route route;
  std::vector<AgentBox> agents;
  std::vector<TrafficLight> traffic_lights;
  EgoState ego;
  Trajectory expert;
};

/// Throws std::invalid_argument when a scene violates its structural invariants.
void validate_scene(const Scene & scene);

/// Throws std::invalid_argument for non-finite values or headings outside (-pi, pi].
void validate_trajectory(const Trajectory & traj);

const char * to_string(RoadFamily family);
RoadFamily road_family_from_string(const std::string & name);

}  // namespace vocabplan

#endif  // VOCABPLAN__CORE__TYPES_HPP_
