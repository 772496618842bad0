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

#ifndef VOCABPLAN__PLANNER_HPP_
#define VOCABPLAN__PLANNER_HPP_

#include "vocabplan/core/random.hpp"
#include "vocabplan/core/types.hpp"
#include "vocabplan/nn/layers.hpp"
#include "vocabplan/nn/tensor.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace vocabplan
{

/// Rendered semantic channels, in order.
enum class BevChannel : std::size_t {
  drivable,
  agent_occupancy,
  agent_speed,
  route_proximity,
  lane_proximity,
  red_stop_line_proximity,
};

inline constexpr std::size_t kSemanticChannels = 6;
/// Fixed normalized (x, y) coordinate channels appended to the semantics before encoding.
inline constexpr std::size_t kCoordinateChannels = 2;
/// Meters per unit in the coordinate channels.
inline constexpr double kCoordinateScale = 8.0;
inline constexpr std::size_t kBevInputChannels = kSemanticChannels + kCoordinateChannels;
inline constexpr std::size_t kEgoFeatures = 6;
inline constexpr std::size_t kAgentFeatures = 7;
inline constexpr std::size_t kOffsetComponents = 3 * kHorizonSteps;
inline constexpr std::size_t kDefaultPlannerWidth = 32;
inline constexpr std::size_t kReferencePlannerWidth = 256;
inline constexpr double kMaxOffsetMeters = 2.0;
inline constexpr double kMaxOffsetRadians = 0.5;
/// Proximity channels are exp(-d / 2 m), truncated to zero beyond this distance.
inline constexpr double kProximityCutoff = 12.0;

struct PlannerParams
{
  nn::Linear bev_encoder;        // (S + 2) -> d, applied per cell
  nn::Linear ego_query;          // ego features -> d
  nn::Tensor waypoint_embedding; // [8 x d]
  nn::Mlp agent_encoder;         // 7 -> d -> d
  nn::Tensor wq;                 // [d x d]
  nn::Tensor wk;
  nn::Tensor wv;
  nn::Mlp offset_head;           // d -> d -> 24, last layer starts at zero

  static PlannerParams init(std::size_t d, Rng & rng);

  std::size_t width() const { return wq.dim(0); }
  void collect(nn::ParameterList & out, const std::string & prefix = "planner/") const;
};

PlannerParams clone(const PlannerParams & p);

/// Semantic grid [6 x H x W] of a scene; constant (no gradient).
nn::Tensor render_bev(const Scene & scene, const BevGridSpec & spec);

/// Semantic grid with the two coordinate channels appended: [8 x H x W].
nn::Tensor bev_input(const nn::Tensor & semantic, const BevGridSpec & spec);

/// Per-cell linear projection of an input grid [C x H x W] to [d x H x W].
nn::Tensor encode_bev(const nn::Tensor & input_grid, const PlannerParams & params);

/// Grid-space sample locations of the 8 waypoints of each trajectory, candidate-major.
std::vector<nn::SamplePoint> waypoint_samples(std::span<const Trajectory> trajs, const BevGridSpec & spec);

/// Normalized ego-state feature row [1 x 6].
nn::Tensor ego_features(const EgoState & ego);

/// Normalized agent feature rows [N x 7].
nn::Tensor agent_features(const std::vector<AgentBox> & agents);

/// Ego-conditioned attention pooling of per-waypoint features [M*8 x d] -> [M x d].
/// Tokens are the features plus waypoint embeddings; the pooled vector is q + Attn(q, tokens, tokens).
nn::Tensor pool_waypoints(const nn::Tensor & waypoint_features, const EgoState & ego, const PlannerParams & params);

/// Full path: bilinear sampling of an encoded feature grid, then pooling -> F_v [M x d].
nn::Tensor embed_candidates(
  const nn::Tensor & feature_grid, std::span<const Trajectory> trajs, const EgoState & ego,
  const PlannerParams & params, const BevGridSpec & spec);

/// Input-grid samples [M*8 x C]; constant, reusable across parameter updates.
nn::Tensor sample_inputs(const nn::Tensor & input_grid, std::span<const Trajectory> trajs, const BevGridSpec & spec);

/// Fast path equivalent to embed_candidates(encode_bev(input), ...): sampling commutes with the
/// per-cell affine map because bilinear weights sum to one.
nn::Tensor embed_from_samples(const nn::Tensor & samples, const EgoState & ego, const PlannerParams & params);

/// F_v^ctx = F_v + CrossAttn(F_v, F_a, F_a); returns F_v unchanged when there are no agents.
nn::Tensor refine_with_agents(const nn::Tensor & fv, const std::vector<AgentBox> & agents, const PlannerParams & params);

/// Clamped residual offsets [n x 24] (dx, dy, dtheta per waypoint) for embeddings [n x d].
nn::Tensor decode_offsets(const nn::Tensor & embeddings, const PlannerParams & params);

/// base + offset row, with headings re-wrapped.
Trajectory apply_offsets(const Trajectory & base, std::span<const double> offsets);
std::vector<Trajectory> apply_offsets(std::span<const Trajectory> bases, const nn::Tensor & offsets);

/// Mean smooth-L1 over the 24 components of (base + offset) against the expert; the heading
/// residual is wrapped into (-pi, pi]. `offset_row` is [1 x 24].
nn::Tensor imitation_loss(const nn::Tensor & offset_row, const Trajectory & base, const Trajectory & expert);

}  // namespace vocabplan

#endif  // VOCABPLAN__PLANNER_HPP_
