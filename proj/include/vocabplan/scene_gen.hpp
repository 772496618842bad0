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

#ifndef VOCABPLAN__SCENE_GEN_HPP_
#define VOCABPLAN__SCENE_GEN_HPP_

#include "vocabplan/core/types.hpp"

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace vocabplan
{

/// Raised when no valid scene is found within the retry budget.
class GenerationError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct SceneConfig
{
  std::uint64_t seed{42};
  std::size_t min_agents{0};
  std::size_t max_agents{8};
  std::vector<RoadFamily> families{
    RoadFamily::straight, RoadFamily::curve_left, RoadFamily::curve_right,
    RoadFamily::t_intersection};
  double min_ego_speed{0.0};   // m/s
  double max_ego_speed{15.0};  // m/s
  // Chance that a T-intersection carries a light, and that a present light is red.
  double traffic_light_probability{0.5};
  double red_light_probability{0.5};
  // Full road width: two lanes of half this width each.
  double min_drivable_width{6.0};
  double max_drivable_width{14.0};
  double parked_fraction{0.3};
  std::size_t max_retries{100};
  BevGridSpec grid{};
};

/// Throws std::invalid_argument for inverted ranges or probabilities outside [0, 1].
void validate_scene_config(const SceneConfig & config);

/// Deterministic per (config, index). Throws GenerationError after max_retries failed attempts.
Scene generate_scene(const SceneConfig & config, std::size_t index);

/// Zero-padded scene identifier, e.g. "scene_000042".
std::string scene_id(std::size_t index);

struct AdversarialConfig
{
  double max_lateral_offset{4.0};  // m
  double min_speed_scale{0.3};
  double max_speed_scale{1.8};
  double heading_noise{0.15};  // rad, standard deviation
};

/// Perturbed expert copies with the generator's own violation flags.
struct AdversarialSet
{
  std::vector<Trajectory> trajectories;
  std::vector<bool> dac_violation;
  std::vector<bool> hc_violation;
};

/// Candidate 0 targets a drivable-area violation, candidate 1 a comfort violation;
/// the rest are random mixtures of lateral offset, speed scaling and heading noise.
AdversarialSet generate_adversarial_candidates(
  const Scene & scene, std::size_t n, std::uint64_t seed, const AdversarialConfig & config = {});

/// Expert resampled along its own path at `scale` times the arc length per step.
Trajectory speed_scaled(const Trajectory & expert, double scale);

/// Waypoint k shifted by offset * min(1, (k + 1) / 3) along its left normal.
Trajectory laterally_offset(const Trajectory & traj, double offset);

}  // namespace vocabplan

#endif  // VOCABPLAN__SCENE_GEN_HPP_
