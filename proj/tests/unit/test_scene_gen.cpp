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
#include "vocabplan/io.hpp"
#include "vocabplan/oracle.hpp"
#include "vocabplan/scene_gen.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace vocabplan
{
namespace
{

// Shared 1000-scene corpus for the corpus-level properties.
const std::vector<Scene> & corpus()
{
  static const std::vector<Scene> scenes = [] {
    std::vector<Scene> out;
    const SceneConfig cfg;
    for (std::size_t i = 0; i < 1000; ++i) out.push_back(generate_scene(cfg, i));
    return out;
  }();
  return scenes;
}

// Expert on a circular arc of radius R turning left at constant speed v.
Trajectory arc_expert(double v, double radius)
{
  Trajectory t;
  for (std::size_t k = 0; k < kHorizonSteps; ++k) {
    const double s = v * kStepSeconds * static_cast<double>(k + 1);
    const double a = s / radius;
    t.waypoints[k] = {radius * std::sin(a), radius * (1.0 - std::cos(a)), wrap_angle(a)};
  }
  return t;
}

TEST(GenerateScene, Deterministic)
{
  SceneConfig cfg;
  cfg.seed = 7;
  for (std::size_t i = 0; i < 20; ++i) {
    const std::string a = io::dump_document(io::scene_to_json(generate_scene(cfg, i)));
    const std::string b = io::dump_document(io::scene_to_json(generate_scene(cfg, i)));
    ASSERT_EQ(a, b) << "index " << i;
  }
  cfg.seed = 8;
  EXPECT_NE(io::dump_document(io::scene_to_json(generate_scene(cfg, 0))),
            io::dump_document(io::scene_to_json(generate_scene(SceneConfig{.seed = 7}, 0))));
}

TEST(GenerateScene, EmptyStraightRoadExpertIsClean)
{
  SceneConfig cfg;
  cfg.max_agents = 0;
  cfg.families = {RoadFamily::straight};
  for (std::size_t i = 0; i < 50; ++i) {
    const Scene s = generate_scene(cfg, i);
    ASSERT_TRUE(s.agents.empty());
    ASSERT_EQ(s.family, RoadFamily::straight);
    ASSERT_EQ(eval_nc(s, s.expert), 1.0);
    ASSERT_EQ(eval_dac(s, s.expert), 1.0);
  }
}

TEST(GenerateScene, ExpertDrivableAreaComplianceAcrossCorpus)
{
  std::size_t clean = 0;
  for (const auto & s : corpus()) clean += eval_dac(s, s.expert) == 1.0;
  EXPECT_GE(clean, 990u);
}

TEST(GenerateScene, StructuralInvariants)
{
  for (const auto & s : corpus()) {
    ASSERT_NO_THROW(validate_scene(s));
    ASSERT_EQ(s.expert.waypoints.size(), 8u);
    ASSERT_LT(std::abs(s.expert.waypoints[0].x - s.ego.velocity.x * Trajectory::dt), 0.5) << s.id;
    for (const auto & a : s.agents) {
      ASSERT_GT(a.w, 0.0);
      ASSERT_GT(a.h, 0.0);
      ASSERT_GT(a.theta, -kPi);
      ASSERT_LE(a.theta, kPi);
    }
  }
}

TEST(GenerateScene, AgentsDoNotOverlapInitially)
{
  for (const auto & s : corpus()) {
    for (std::size_t i = 0; i < s.agents.size(); ++i) {
      for (std::size_t j = i + 1; j < s.agents.size(); ++j) {
        ASSERT_FALSE(boxes_overlap(agent_box_at(s.agents[i], 0.0), agent_box_at(s.agents[j], 0.0)))
          << s.id << " agents " << i << ", " << j;
      }
    }
  }
}

TEST(GenerateScene, CoversEveryFamily)
{
  std::array<std::size_t, 4> counts{};
  std::size_t lights = 0;
  for (const auto & s : corpus()) {
    ++counts[static_cast<std::size_t>(s.family)];
    lights += !s.traffic_lights.empty();
  }
  for (auto c : counts) EXPECT_GT(c, 150u);
  EXPECT_GT(lights, 0u);
}

TEST(GenerateScene, IdsAreZeroPadded)
{
  EXPECT_EQ(scene_id(42), "scene_000042");
  EXPECT_EQ(generate_scene(SceneConfig{}, 3).id, "scene_000003");
}

TEST(SceneConfig, Validation)
{
  EXPECT_NO_THROW(validate_scene_config(SceneConfig{}));
  SceneConfig c;
  c.min_agents = 5;
  c.max_agents = 2;
  EXPECT_THROW(validate_scene_config(c), std::invalid_argument);
  c = {};
  c.traffic_light_probability = 1.5;
  EXPECT_THROW(validate_scene_config(c), std::invalid_argument);
  c = {};
  c.min_ego_speed = 10.0;
  c.max_ego_speed = 5.0;
  EXPECT_THROW(validate_scene_config(c), std::invalid_argument);
  c = {};
  c.min_drivable_width = 15.0;
  EXPECT_THROW(validate_scene_config(c), std::invalid_argument);
  c = {};
  c.families.clear();
  EXPECT_THROW(validate_scene_config(c), std::invalid_argument);
  EXPECT_THROW(generate_scene(c, 0), std::invalid_argument);
}

TEST(Adversarial, ZeroMagnitudeConfigReturnsExpert)
{
  const AdversarialConfig zero{0.0, 1.0, 1.0, 0.0};
  for (std::size_t i = 0; i < 20; ++i) {
    const Scene s = corpus()[i];
    const auto set = generate_adversarial_candidates(s, 1, 99, zero);
    ASSERT_EQ(set.trajectories.size(), 1u);
    ASSERT_EQ(set.trajectories[0], s.expert);
  }
  EXPECT_THROW(generate_adversarial_candidates(corpus()[0], 0, 1), std::invalid_argument);
}

TEST(Adversarial, FourMeterOffsetLeavesSixMeterRoad)
{
  Scene s = test::road_scene(6.0);
  s.expert = test::straight(10.0);
  s.ego.velocity = {10.0, 0.0};
  ASSERT_EQ(eval_dac(s, s.expert), 1.0);
  EXPECT_EQ(eval_dac(s, laterally_offset(s.expert, 4.0)), 0.0);
  EXPECT_EQ(eval_dac(s, laterally_offset(s.expert, -4.0)), 0.0);
  const auto set = generate_adversarial_candidates(s, 4, 5);
  EXPECT_TRUE(set.dac_violation[0]);
  EXPECT_EQ(eval_dac(s, set.trajectories[0]), 0.0);
}

TEST(Adversarial, FastCurveBreaksComfort)
{
  Scene s = test::pad_scene();
  s.family = RoadFamily::curve_left;
  s.expert = arc_expert(10.0, 30.0);
  s.ego.velocity = {10.0, 0.0};
  ASSERT_EQ(eval_hc(s, s.expert), 1.0);
  EXPECT_EQ(eval_hc(s, speed_scaled(s.expert, 1.8)), 0.0);

  // Generated curve scenes near 10 m/s behave the same way.
  SceneConfig cfg;
  cfg.families = {RoadFamily::curve_left, RoadFamily::curve_right};
  cfg.min_ego_speed = 9.0;
  cfg.max_ego_speed = 11.0;
  for (std::size_t i = 0; i < 30; ++i) {
    const Scene g = generate_scene(cfg, i);
    ASSERT_EQ(eval_hc(g, speed_scaled(g.expert, 1.8)), 0.0) << g.id;
  }
}

TEST(Adversarial, FlagsAgreeWithOracle)
{
  std::size_t with_dac = 0;
  std::size_t with_hc = 0;
  const std::size_t scenes = 200;
  for (std::size_t i = 0; i < scenes; ++i) {
    const Scene & s = corpus()[i];
    const auto set = generate_adversarial_candidates(s, 16, 1000 + i);
    ASSERT_EQ(set.trajectories.size(), 16u);
    bool any_dac = false;
    bool any_hc = false;
    for (std::size_t c = 0; c < set.trajectories.size(); ++c) {
      ASSERT_NO_THROW(validate_trajectory(set.trajectories[c]));
      const double dac = eval_dac(s, set.trajectories[c]);
      const double hc = eval_hc(s, set.trajectories[c]);
      ASSERT_EQ(set.dac_violation[c], dac == 0.0) << s.id << " candidate " << c;
      ASSERT_EQ(set.hc_violation[c], hc == 0.0) << s.id << " candidate " << c;
      any_dac = any_dac || dac == 0.0;
      any_hc = any_hc || hc == 0.0;
    }
    with_dac += any_dac;
    with_hc += any_hc;
  }
  EXPECT_EQ(with_dac, scenes);
  EXPECT_EQ(with_hc, scenes);
}

TEST(Perturbations, IdentityAtNeutralMagnitude)
{
  const Scene & s = corpus()[1];
  EXPECT_EQ(speed_scaled(s.expert, 1.0), s.expert);
  EXPECT_EQ(laterally_offset(s.expert, 0.0), s.expert);
}

TEST(Perturbations, SpeedScalingScalesArcLength)
{
  const Trajectory e = test::straight(8.0);
  const Trajectory slow = speed_scaled(e, 0.5);
  for (std::size_t k = 0; k < kHorizonSteps; ++k) {
    EXPECT_NEAR(slow.waypoints[k].x, 0.5 * e.waypoints[k].x, 1e-12);
  }
  const Trajectory fast = speed_scaled(e, 1.5);
  EXPECT_NEAR(fast.waypoints[7].x, 1.5 * e.waypoints[7].x, 1e-12);
}

TEST(Perturbations, LateralOffsetRampsOverThreeSteps)
{
  const Trajectory moved = laterally_offset(test::straight(10.0), 3.0);
  EXPECT_NEAR(moved.waypoints[0].y, 1.0, 1e-12);
  EXPECT_NEAR(moved.waypoints[1].y, 2.0, 1e-12);
  for (std::size_t k = 2; k < kHorizonSteps; ++k) EXPECT_NEAR(moved.waypoints[k].y, 3.0, 1e-12);
}

}  // namespace
}  // namespace vocabplan
