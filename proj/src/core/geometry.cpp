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

#include "vocabplan/core/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vocabplan
{

double wrap_angle(double theta)
{
  if (!std::isfinite(theta)) {
    throw std::invalid_argument("wrap_angle: non-finite angle");
  }
  if (theta > -kPi && theta <= kPi) {
    return theta;
  }
  double r = std::fmod(theta + kPi, 2.0 * kPi);
  if (r < 0.0) {
    r += 2.0 * kPi;
  }
  const double wrapped = r - kPi;
  return wrapped <= -kPi ? kPi : wrapped;
}

std::array<Vec2, 4> OrientedBox::corners() const
{
  const double c = std::cos(heading);
  const double s = std::sin(heading);
  const double hl = 0.5 * length;
  const double hw = 0.5 * width;
  const auto place = [&](double lx, double ly) {
    return Vec2{center.x + c * lx - s * ly, center.y + s * lx + c * ly};
  };
  return {place(hl, hw), place(-hl, hw), place(-hl, -hw), place(hl, -hw)};
}

OrientedBox agent_box_at(const AgentBox & agent, double t_seconds)
{
  return OrientedBox{
    {agent.x + agent.vx * t_seconds, agent.y + agent.vy * t_seconds}, agent.theta, agent.h,
    agent.w};
}

namespace
{

bool separated_along(const std::array<Vec2, 4> & a, const std::array<Vec2, 4> & b, const Vec2 & axis)
{
  double min_a = std::numeric_limits<double>::infinity();
  double max_a = -min_a;
  double min_b = min_a;
  double max_b = -min_a;
  for (const auto & p : a) {
    const double d = p.dot(axis);
    min_a = std::min(min_a, d);
    max_a = std::max(max_a, d);
  }
  for (const auto & p : b) {
    const double d = p.dot(axis);
    min_b = std::min(min_b, d);
    max_b = std::max(max_b, d);
  }
  return max_a <= min_b || max_b <= min_a;
}

double orientation(const Vec2 & a, const Vec2 & b, const Vec2 & c)
{
  return (b - a).cross(c - a);
}

bool on_segment(const Vec2 & a, const Vec2 & b, const Vec2 & p)
{
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

}  // namespace

bool boxes_overlap(const OrientedBox & a, const OrientedBox & b)
{
  const auto ca = a.corners();
  const auto cb = b.corners();
  const std::array<Vec2, 4> axes = {
    Vec2{std::cos(a.heading), std::sin(a.heading)},
    Vec2{-std::sin(a.heading), std::cos(a.heading)},
    Vec2{std::cos(b.heading), std::sin(b.heading)},
    Vec2{-std::sin(b.heading), std::cos(b.heading)},
  };
  for (const auto & axis : axes) {
    if (separated_along(ca, cb, axis)) {
      return false;
    }
  }
  return true;
}

bool boxes_overlap_during(
  const OrientedBox & a, const Vec2 & velocity_a, const OrientedBox & b, const Vec2 & velocity_b, double duration)
{
  if (!(duration >= 0.0)) {
    throw std::invalid_argument("boxes_overlap_during: duration must be non-negative");
  }
  const auto ca = a.corners();
  const auto cb = b.corners();
  const Vec2 rel = velocity_a - velocity_b;
  const std::array<Vec2, 4> axes = {
    Vec2{std::cos(a.heading), std::sin(a.heading)},
    Vec2{-std::sin(a.heading), std::cos(a.heading)},
    Vec2{std::cos(b.heading), std::sin(b.heading)},
    Vec2{-std::sin(b.heading), std::cos(b.heading)},
  };
  // Open interval of times at which the projections overlap, intersected over all axes.
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (const auto & axis : axes) {
    double min_a = std::numeric_limits<double>::infinity();
    double max_a = -min_a;
    double min_b = min_a;
    double max_b = -min_a;
    for (const auto & p : ca) {
      min_a = std::min(min_a, p.dot(axis));
      max_a = std::max(max_a, p.dot(axis));
    }
    for (const auto & p : cb) {
      min_b = std::min(min_b, p.dot(axis));
      max_b = std::max(max_b, p.dot(axis));
    }
    const double d = rel.dot(axis);
    if (d == 0.0) {
      if (max_a <= min_b || max_b <= min_a) {
        return false;
      }
      continue;
    }
    double enter = (min_b - max_a) / d;
    double leave = (max_b - min_a) / d;
    if (d < 0.0) std::swap(enter, leave);
    lo = std::max(lo, enter);
    hi = std::min(hi, leave);
    if (lo >= hi) {
      return false;
    }
  }
  return lo < duration && hi > 0.0;
}

bool segments_intersect(const Vec2 & p1, const Vec2 & p2, const Vec2 & q1, const Vec2 & q2)
{
  const double d1 = orientation(q1, q2, p1);
  const double d2 = orientation(q1, q2, p2);
  const double d3 = orientation(p1, p2, q1);
  const double d4 = orientation(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

double point_segment_distance(const Vec2 & p, const Vec2 & a, const Vec2 & b)
{
  const Vec2 ab = b - a;
  const double len2 = ab.dot(ab);
  if (len2 <= 0.0) {
    return (p - a).norm();
  }
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + ab * t)).norm();
}

PolylineProjection project_onto_polyline(std::span<const Vec2> polyline, const Vec2 & p)
{
  if (polyline.size() < 2) {
    throw std::invalid_argument("project_onto_polyline: polyline needs at least two points");
  }
  PolylineProjection best;
  best.distance = std::numeric_limits<double>::infinity();
  double walked = 0.0;
  bool any_segment = false;
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
    const Vec2 a = polyline[i];
    const Vec2 ab = polyline[i + 1] - a;
    const double len = ab.norm();
    if (len <= 0.0) {
      continue;
    }
    any_segment = true;
    const double t = std::clamp((p - a).dot(ab) / (len * len), 0.0, 1.0);
    const double dist = (p - (a + ab * t)).norm();
    if (dist < best.distance) {
      best.distance = dist;
      best.arc_length = walked + t * len;
      best.tangent = ab / len;
    }
    walked += len;
  }
  if (!any_segment) {
    throw std::invalid_argument("project_onto_polyline: degenerate polyline");
  }
  return best;
}

double polyline_length(std::span<const Vec2> polyline)
{
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
    total += (polyline[i + 1] - polyline[i]).norm();
  }
  return total;
}

double polygon_area(std::span<const Vec2> polygon)
{
  double twice = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    twice += polygon[i].cross(polygon[(i + 1) % polygon.size()]);
  }
  return 0.5 * std::abs(twice);
}

}  // namespace vocabplan
