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

#ifndef VOCABPLAN__CORE__GEOMETRY_HPP_
#define VOCABPLAN__CORE__GEOMETRY_HPP_

#include "vocabplan/core/types.hpp"

#include <array>
#include <span>

namespace vocabplan
{

inline constexpr double kPi = 3.14159265358979323846;

/// Maps theta into (-pi, pi]. Throws std::invalid_argument for non-finite input.
double wrap_angle(double theta);

/// Rectangle with center, heading, and full length (along heading) / width.
struct OrientedBox
{
  Vec2 center{};
  double heading{0.0};
  double length{0.0};
  double width{0.0};

  /// Counter-clockwise: front-left, rear-left, rear-right, front-right.
  std::array<Vec2, 4> corners() const;
};

OrientedBox agent_box_at(const AgentBox & agent, double t_seconds);

/// Separating-axis test; boxes touching along an edge do not count as overlapping.
bool boxes_overlap(const OrientedBox & a, const OrientedBox & b);

/// True when the boxes, translating at constant velocities from the given poses, overlap with
/// positive area at some time in [0, duration]. Exact (the relative motion is a translation).
bool boxes_overlap_during(
  const OrientedBox & a, const Vec2 & velocity_a, const OrientedBox & b, const Vec2 & velocity_b, double duration);

/// Proper or touching intersection of closed segments p1-p2 and q1-q2.
bool segments_intersect(const Vec2 & p1, const Vec2 & p2, const Vec2 & q1, const Vec2 & q2);

double point_segment_distance(const Vec2 & p, const Vec2 & a, const Vec2 & b);

struct PolylineProjection
{
  double arc_length{0.0};  // along the polyline to the closest point
  double distance{0.0};    // Euclidean distance to the closest point
  Vec2 tangent{1.0, 0.0};  // unit direction of the closest segment, polyline order
};

/// Closest-point projection onto a polyline with at least two points.
PolylineProjection project_onto_polyline(std::span<const Vec2> polyline, const Vec2 & p);

double polyline_length(std::span<const Vec2> polyline);

/// Shoelace area of a simple polygon.
double polygon_area(std::span<const Vec2> polygon);

}  // namespace vocabplan

#endif  // VOCABPLAN__CORE__GEOMETRY_HPP_
