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

#include "test_support.hpp"

#include "vocabplan/core/geometry.hpp"
#include "vocabplan/core/grid.hpp"
#include "vocabplan/core/kinematics.hpp"
#include "vocabplan/core/random.hpp"
#include "vocabplan/core/types.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

namespace vocabplan
{
namespace
{

TEST(WrapAngle, Examples)
{
  EXPECT_EQ(wrap_angle(0.0), 0.0);
  EXPECT_NEAR(wrap_angle(3.0 * kPi), kPi, 1e-12);
  EXPECT_EQ(wrap_angle(-kPi), kPi);
  EXPECT_EQ(wrap_angle(kPi), kPi);
}

TEST(WrapAngle, RejectsNonFinite)
{
  EXPECT_THROW(wrap_angle(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
  EXPECT_THROW(wrap_angle(std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST(WrapAngle, RangeCongruenceAndIdempotence)
{
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double theta = rng.uniform(-100.0, 100.0);
    const double w = wrap_angle(theta);
    ASSERT_GT(w, -kPi);
    ASSERT_LE(w, kPi);
    const double turns = (theta - w) / (2.0 * kPi);
    ASSERT_NEAR(turns, std::round(turns), 1e-9);
    ASSERT_EQ(wrap_angle(w), w);
  }
}

TEST(WorldToGrid, Examples)
{
  const BevGridSpec spec;
  EXPECT_DOUBLE_EQ(spec.cell_size_x(), 0.5);
  EXPECT_DOUBLE_EQ(spec.cell_size_y(), 0.5);

  const auto g0 = world_to_grid(Vec2{0.0, 0.0}, spec);
  EXPECT_EQ(g0.u, 64.0);
  EXPECT_EQ(g0.v, 64.0);
  const auto g1 = world_to_grid(Vec2{-32.0, -32.0}, spec);
  EXPECT_EQ(g1.u, 0.0);
  EXPECT_EQ(g1.v, 0.0);
  const auto g2 = world_to_grid(Waypoint{0.25, -0.25, 0.0}, spec);
  EXPECT_EQ(g2.u, 64.5);
  EXPECT_EQ(g2.v, 63.5);
}

TEST(WorldToGrid, InverseRoundTrip)
{
  const BevGridSpec spec;
  Rng rng(2);
  for (int i = 0; i < 10000; ++i) {
    const Vec2 p{rng.uniform(-32.0, 32.0), rng.uniform(-32.0, 32.0)};
    const Vec2 q = grid_to_world(world_to_grid(p, spec), spec);
    ASSERT_NEAR(q.x, p.x, 1e-12);
    ASSERT_NEAR(q.y, p.y, 1e-12);
  }
}

TEST(Grid, CellCentersAndLookup)
{
  const BevGridSpec spec;
  const Vec2 c = cell_center(64, 63, spec);
  EXPECT_EQ(c.x, 0.25);
  EXPECT_EQ(c.y, -0.25);
  const auto cell = cell_of({0.1, -0.1}, spec);
  ASSERT_TRUE(cell.has_value());
  EXPECT_EQ(cell->u, 64);
  EXPECT_EQ(cell->v, 63);
  EXPECT_FALSE(cell_of({32.0, 0.0}, spec).has_value());
  EXPECT_FALSE(cell_of({-32.01, 0.0}, spec).has_value());

  DrivableMask mask(spec.cells_x, spec.cells_y, false);
  mask.set(64, 63, true);
  EXPECT_TRUE(is_drivable(mask, spec, {0.1, -0.1}));
  EXPECT_FALSE(is_drivable(mask, spec, {0.6, -0.1}));
  // Outside the extent counts as drivable.
  EXPECT_TRUE(is_drivable(mask, spec, {40.0, 0.0}));
}

TEST(Kinematics, Stationary)
{
  const Trajectory t{};
  const auto k = kinematics(t, EgoState{});
  for (double s : k.speed) EXPECT_EQ(s, 0.0);
  for (double a : k.accel_lon) EXPECT_EQ(a, 0.0);
  for (double a : k.accel_lat) EXPECT_EQ(a, 0.0);
  for (double j : k.jerk_magnitude) EXPECT_EQ(j, 0.0);
  EXPECT_EQ(k.history_accel_lon, 0.0);
}

TEST(Kinematics, ConstantSpeed)
{
  EgoState ego;
  ego.velocity = {5.0, 0.0};
  const auto k = kinematics(test::straight(5.0), ego);
  for (double s : k.speed) EXPECT_NEAR(s, 5.0, 1e-12);
  for (double a : k.accel_lon) EXPECT_NEAR(a, 0.0, 1e-9);
  for (double j : k.jerk_magnitude) EXPECT_NEAR(j, 0.0, 1e-9);
  EXPECT_NEAR(k.history_accel_lon, 0.0, 1e-9);
  EXPECT_EQ(k.speed.size(), 8u);
  EXPECT_EQ(k.accel.size(), 7u);
  EXPECT_EQ(k.jerk.size(), 6u);
}

TEST(Kinematics, HandSecondDifference)
{
  const Trajectory t = test::from_positions({{0, 0}, {0.5, 0}, {1.5, 0}, {3.0, 0}, {5.0, 0}, {7.5, 0}, {10.5, 0}, {14.0, 0}});
  const auto k = kinematics(t, EgoState{});
  // (1.5 - 2 * 0.5 + 0) / 0.25
  EXPECT_NEAR(k.accel_lon[1], 2.0, 1e-12);
  for (double j : k.jerk_magnitude) EXPECT_NEAR(j, 0.0, 1e-9);
}

TEST(Kinematics, ConstantVelocityProperty)
{
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const Vec2 v{rng.uniform(-15.0, 15.0), rng.uniform(-15.0, 15.0)};
    Trajectory t;
    const double heading = std::atan2(v.y, v.x);
    for (std::size_t s = 0; s < kHorizonSteps; ++s) {
      const double time = kStepSeconds * static_cast<double>(s + 1);
      t.waypoints[s] = {v.x * time, v.y * time, heading};
    }
    EgoState ego;
    ego.velocity = v;
    const auto k = kinematics(t, ego);
    for (const auto & a : k.accel) ASSERT_NEAR(a.norm(), 0.0, 1e-9);
    for (double j : k.jerk_magnitude) ASSERT_NEAR(j, 0.0, 1e-9);
  }
}

TEST(Footprint, AxisAlignedAndRotated)
{
  Trajectory t;
  const EgoState ego;
  auto corners = ego_footprint(t, ego, 0).corners();
  for (const auto & c : corners) {
    EXPECT_NEAR(std::abs(c.x), 2.3, 1e-12);
    EXPECT_NEAR(std::abs(c.y), 0.95, 1e-12);
  }
  EXPECT_NEAR(corners[0].x, 2.3, 1e-12);
  EXPECT_NEAR(corners[0].y, 0.95, 1e-12);

  t.waypoints[0].theta = kPi / 2.0;
  corners = ego_footprint(t, ego, 0).corners();
  for (const auto & c : corners) {
    EXPECT_NEAR(std::abs(c.x), 0.95, 1e-12);
    EXPECT_NEAR(std::abs(c.y), 2.3, 1e-12);
  }

  t.waypoints[0].theta = kPi / 4.0;
  corners = ego_footprint(t, ego, 0).corners();
  const double r = std::sqrt(0.5);
  EXPECT_NEAR(corners[0].x, 2.3 * r - 0.95 * r, 1e-12);
  EXPECT_NEAR(corners[0].y, 2.3 * r + 0.95 * r, 1e-12);
  EXPECT_NEAR(corners[0].x, 0.9546, 1e-4);
  EXPECT_NEAR(corners[0].y, 2.2981, 1e-4);
}

TEST(Footprint, StepOutOfRange)
{
  EXPECT_THROW(ego_footprint(Trajectory{}, EgoState{}, 8), std::out_of_range);
}

TEST(Footprint, AreaInvariantUnderRotation)
{
  Rng rng(4);
  Trajectory t;
  for (int i = 0; i < 1000; ++i) {
    t.waypoints[3] = {rng.uniform(-20.0, 20.0), rng.uniform(-20.0, 20.0), wrap_angle(rng.uniform(-4.0, 4.0))};
    const auto corners = ego_footprint(t, EgoState{}, 3).corners();
    ASSERT_NEAR(polygon_area(corners), 4.6 * 1.9, 1e-9);
  }
}

TEST(Geometry, SegmentIntersection)
{
  EXPECT_TRUE(segments_intersect({0, 0}, {2, 2}, {0, 2}, {2, 0}));
  EXPECT_FALSE(segments_intersect({0, 0}, {1, 0}, {0, 1}, {1, 1}));
  // Touching at an endpoint counts.
  EXPECT_TRUE(segments_intersect({0, 0}, {1, 0}, {1, 0}, {1, 1}));
  // Collinear overlap and collinear disjoint.
  EXPECT_TRUE(segments_intersect({0, 0}, {2, 0}, {1, 0}, {3, 0}));
  EXPECT_FALSE(segments_intersect({0, 0}, {1, 0}, {2, 0}, {3, 0}));
}

TEST(Geometry, PolylineProjection)
{
  const std::vector<Vec2> line{{0, 0}, {10, 0}, {10, 10}};
  EXPECT_DOUBLE_EQ(polyline_length(line), 20.0);
  const auto p = project_onto_polyline(line, {4.0, 1.0});
  EXPECT_DOUBLE_EQ(p.arc_length, 4.0);
  EXPECT_DOUBLE_EQ(p.distance, 1.0);
  const auto q = project_onto_polyline(line, {11.0, 5.0});
  EXPECT_DOUBLE_EQ(q.arc_length, 15.0);
  EXPECT_DOUBLE_EQ(q.distance, 1.0);
  EXPECT_DOUBLE_EQ(q.tangent.y, 1.0);
  EXPECT_DOUBLE_EQ(point_segment_distance({-3, 4}, {0, 0}, {10, 0}), 5.0);
}

TEST(Types, Validation)
{
  Scene s = test::pad_scene();
  EXPECT_NO_THROW(validate_scene(s));
  Scene bad = s;
  bad.route.points.resize(1);
  EXPECT_THROW(validate_scene(bad), std::invalid_argument);
  bad = s;
  bad.route.reference_progress = 0.0;
  EXPECT_THROW(validate_scene(bad), std::invalid_argument);
  bad = s;
  bad.drivable = DrivableMask(64, 64);
  EXPECT_THROW(validate_scene(bad), std::invalid_argument);
  bad = s;
  bad.ego.length = 0.0;
  EXPECT_THROW(validate_scene(bad), std::invalid_argument);

  Trajectory t;
  t.waypoints[2].theta = -kPi;
  EXPECT_THROW(validate_trajectory(t), std::invalid_argument);
  t.waypoints[2].theta = 0.0;
  t.waypoints[5].x = std::numeric_limits<double>::infinity();
  EXPECT_THROW(validate_trajectory(t), std::invalid_argument);
}

TEST(Types, TrajectoryShapeConstants)
{
  EXPECT_EQ(kHorizonSteps, 8u);
  EXPECT_EQ(Trajectory::dt, 0.5);
  EXPECT_EQ(kHorizonSeconds, 4.0);
  const BevGridSpec spec;
  EXPECT_EQ(spec.cells_x, 128);
  EXPECT_EQ(spec.cells_y, 128);
  EXPECT_EQ(spec.extent_x, 64.0);
  EXPECT_EQ(spec.extent_y, 64.0);
}

TEST(Types, RoadFamilyNames)
{
  for (auto f : {RoadFamily::straight, RoadFamily::curve_left, RoadFamily::curve_right, RoadFamily::t_intersection}) {
    EXPECT_EQ(road_family_from_string(to_string(f)), f);
  }
  EXPECT_THROW(road_family_from_string("roundabout"), std::invalid_argument);
}

}  // namespace
}  // namespace vocabplan
