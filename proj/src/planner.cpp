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

#include "vocabplan/planner.hpp"

#include "vocabplan/core/geometry.hpp"
#include "vocabplan/core/grid.hpp"
#include "vocabplan/nn/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vocabplan
{

using nn::Tensor;

namespace
{

struct Segment
{
  Vec2 a;
  Vec2 b;
};

void append_polyline(const std::vector<Vec2> & points, std::vector<Segment> & out)
{
  for (std::size_t i = 0; i + 1 < points.size(); ++i) out.push_back({points[i], points[i + 1]});
}

struct CellRange
{
  int u_lo, u_hi, v_lo, v_hi;
};

CellRange cells_near(double x_lo, double x_hi, double y_lo, double y_hi, const BevGridSpec & spec)
{
  const double csx = spec.cell_size_x();
  const double csy = spec.cell_size_y();
  const auto idx = [](double coord, double half, double cs) {
    return static_cast<int>(std::floor((coord + half) / cs));
  };
  return {std::max(0, idx(x_lo, spec.extent_x / 2.0, csx)),
          std::min(spec.cells_x - 1, idx(x_hi, spec.extent_x / 2.0, csx)),
          std::max(0, idx(y_lo, spec.extent_y / 2.0, csy)),
          std::min(spec.cells_y - 1, idx(y_hi, spec.extent_y / 2.0, csy))};
}

void fill_proximity(
  const std::vector<Segment> & segments, const BevGridSpec & spec, std::span<double> channel)
{
  const auto cells = static_cast<std::size_t>(spec.cells_x) * static_cast<std::size_t>(spec.cells_y);
  std::vector<double> dist(cells, std::numeric_limits<double>::infinity());
  for (const auto & seg : segments) {
    const CellRange r = cells_near(
      std::min(seg.a.x, seg.b.x) - kProximityCutoff, std::max(seg.a.x, seg.b.x) + kProximityCutoff,
      std::min(seg.a.y, seg.b.y) - kProximityCutoff, std::max(seg.a.y, seg.b.y) + kProximityCutoff, spec);
    for (int v = r.v_lo; v <= r.v_hi; ++v) {
      for (int u = r.u_lo; u <= r.u_hi; ++u) {
        const std::size_t i = static_cast<std::size_t>(v) * static_cast<std::size_t>(spec.cells_x) +
                              static_cast<std::size_t>(u);
        dist[i] = std::min(dist[i], point_segment_distance(cell_center(u, v, spec), seg.a, seg.b));
      }
    }
  }
  for (std::size_t i = 0; i < cells; ++i) {
    channel[i] = dist[i] <= kProximityCutoff ? std::exp(-dist[i] / 2.0) : 0.0;
  }
}

Tensor uniform_matrix(std::size_t rows, std::size_t cols, double bound, Rng & rng)
{
  std::vector<double> v(rows * cols);
  for (auto & x : v) x = rng.uniform(-bound, bound);
  return Tensor::from_values({rows, cols}, std::move(v), true);
}

}  // namespace

PlannerParams PlannerParams::init(std::size_t d, Rng & rng)
{
  if (d == 0) {
    throw std::invalid_argument("planner width must be positive");
  }
  PlannerParams p;
  p.bev_encoder = nn::Linear::uniform_init(kBevInputChannels, d, rng);
  p.ego_query = nn::Linear::uniform_init(kEgoFeatures, d, rng);
  p.waypoint_embedding = uniform_matrix(kHorizonSteps, d, 0.5, rng);
  p.agent_encoder = nn::Mlp::uniform_init({kAgentFeatures, d, d}, rng);
  const double bound = 1.0 / std::sqrt(static_cast<double>(d));
  p.wq = uniform_matrix(d, d, bound, rng);
  p.wk = uniform_matrix(d, d, bound, rng);
  p.wv = uniform_matrix(d, d, bound, rng);
  p.offset_head = nn::Mlp::uniform_init({d, d, kOffsetComponents}, rng);
  p.offset_head.layers.back() = nn::Linear::zeros(d, kOffsetComponents);
  return p;
}

void PlannerParams::collect(nn::ParameterList & out, const std::string & prefix) const
{
  bev_encoder.collect(prefix + "bev_encoder/", out);
  ego_query.collect(prefix + "ego_query/", out);
  out.emplace_back(prefix + "waypoint_embedding", waypoint_embedding);
  agent_encoder.collect(prefix + "agent_encoder/", out);
  out.emplace_back(prefix + "cross_attention/wq", wq);
  out.emplace_back(prefix + "cross_attention/wk", wk);
  out.emplace_back(prefix + "cross_attention/wv", wv);
  offset_head.collect(prefix + "offset_head/", out);
}

PlannerParams clone(const PlannerParams & p)
{
  PlannerParams c;
  c.bev_encoder = nn::clone(p.bev_encoder);
  c.ego_query = nn::clone(p.ego_query);
  c.waypoint_embedding = nn::clone_leaf(p.waypoint_embedding);
  c.agent_encoder = nn::clone(p.agent_encoder);
  c.wq = nn::clone_leaf(p.wq);
  c.wk = nn::clone_leaf(p.wk);
  c.wv = nn::clone_leaf(p.wv);
  c.offset_head = nn::clone(p.offset_head);
  return c;
}

Tensor render_bev(const Scene & scene, const BevGridSpec & spec)
{
  if (scene.drivable.cells_x() != spec.cells_x || scene.drivable.cells_y() != spec.cells_y) {
    throw std::invalid_argument("render_bev: drivable mask does not match the grid");
  }
  const auto w = static_cast<std::size_t>(spec.cells_x);
  const auto h = static_cast<std::size_t>(spec.cells_y);
  const std::size_t plane = w * h;
  std::vector<double> values(kSemanticChannels * plane, 0.0);
  const auto channel = [&](BevChannel c) {
    return std::span<double>(values.data() + static_cast<std::size_t>(c) * plane, plane);
  };

  auto drivable = channel(BevChannel::drivable);
  for (std::size_t v = 0; v < h; ++v) {
    for (std::size_t u = 0; u < w; ++u) {
      drivable[v * w + u] = scene.drivable.at(static_cast<int>(u), static_cast<int>(v)) ? 1.0 : 0.0;
    }
  }

  auto occupancy = channel(BevChannel::agent_occupancy);
  auto speed = channel(BevChannel::agent_speed);
  for (const auto & agent : scene.agents) {
    const OrientedBox box = agent_box_at(agent, 0.0);
    const auto corners = box.corners();
    double x_lo = corners[0].x, x_hi = corners[0].x, y_lo = corners[0].y, y_hi = corners[0].y;
    for (const auto & c : corners) {
      x_lo = std::min(x_lo, c.x);
      x_hi = std::max(x_hi, c.x);
      y_lo = std::min(y_lo, c.y);
      y_hi = std::max(y_hi, c.y);
    }
    const Vec2 axis{std::cos(box.heading), std::sin(box.heading)};
    const Vec2 side{-axis.y, axis.x};
    const double forward = std::clamp(agent.velocity().dot(axis), 0.0, 20.0) / 20.0;
    const CellRange r = cells_near(x_lo, x_hi, y_lo, y_hi, spec);
    for (int v = r.v_lo; v <= r.v_hi; ++v) {
      for (int u = r.u_lo; u <= r.u_hi; ++u) {
        const Vec2 d = cell_center(u, v, spec) - box.center;
        if (std::abs(d.dot(axis)) <= box.length / 2.0 && std::abs(d.dot(side)) <= box.width / 2.0) {
          const std::size_t i = static_cast<std::size_t>(v) * w + static_cast<std::size_t>(u);
          occupancy[i] = 1.0;
          speed[i] = std::max(speed[i], forward);
        }
      }
    }
  }

  std::vector<Segment> route;
  append_polyline(scene.route.points, route);
  fill_proximity(route, spec, channel(BevChannel::route_proximity));

  std::vector<Segment> lanes;
  for (const auto & lane : scene.lanes) append_polyline(lane.points, lanes);
  fill_proximity(lanes, spec, channel(BevChannel::lane_proximity));

  std::vector<Segment> red;
  for (const auto & light : scene.traffic_lights) {
    if (light.state == LightState::red) red.push_back({light.stop_a, light.stop_b});
  }
  fill_proximity(red, spec, channel(BevChannel::red_stop_line_proximity));

  return Tensor::from_values({kSemanticChannels, h, w}, std::move(values));
}

Tensor bev_input(const Tensor & semantic, const BevGridSpec & spec)
{
  const auto w = static_cast<std::size_t>(spec.cells_x);
  const auto h = static_cast<std::size_t>(spec.cells_y);
  if (semantic.shape() != nn::Shape{kSemanticChannels, h, w}) {
    throw std::invalid_argument("bev_input: expected semantic grid " +
                                nn::shape_string({kSemanticChannels, h, w}) + ", got " +
                                nn::shape_string(semantic.shape()));
  }
  const std::size_t plane = w * h;
  std::vector<double> values(kBevInputChannels * plane);
  std::copy(semantic.values().begin(), semantic.values().end(), values.begin());
  for (std::size_t v = 0; v < h; ++v) {
    for (std::size_t u = 0; u < w; ++u) {
      const Vec2 c = cell_center(static_cast<int>(u), static_cast<int>(v), spec);
      values[kSemanticChannels * plane + v * w + u] = c.x / kCoordinateScale;
      values[(kSemanticChannels + 1) * plane + v * w + u] = c.y / kCoordinateScale;
    }
  }
  return Tensor::from_values({kBevInputChannels, h, w}, std::move(values));
}

Tensor encode_bev(const Tensor & input_grid, const PlannerParams & params)
{
  if (input_grid.rank() != 3 || input_grid.dim(0) != params.bev_encoder.in_features()) {
    throw std::invalid_argument(
      "encode_bev: grid " + nn::shape_string(input_grid.shape()) + " does not match encoder input width " +
      std::to_string(params.bev_encoder.in_features()));
  }
  const std::size_t c = input_grid.dim(0), h = input_grid.dim(1), w = input_grid.dim(2);
  const Tensor cells = nn::transpose(nn::reshape(input_grid, {c, h * w}));
  const Tensor projected = params.bev_encoder.forward(cells);
  return nn::reshape(nn::transpose(projected), {params.bev_encoder.out_features(), h, w});
}

std::vector<nn::SamplePoint> waypoint_samples(std::span<const Trajectory> trajs, const BevGridSpec & spec)
{
  std::vector<nn::SamplePoint> points;
  points.reserve(trajs.size() * kHorizonSteps);
  for (const auto & t : trajs) {
    for (const auto & w : t.waypoints) {
      const GridPoint g = world_to_grid(w, spec);
      points.push_back({g.u, g.v});
    }
  }
  return points;
}

Tensor ego_features(const EgoState & ego)
{
  return Tensor::from_values(
    {1, kEgoFeatures},
    {ego.velocity.x / 10.0, ego.velocity.y / 10.0, ego.acceleration.x / 3.0, ego.acceleration.y / 3.0,
     ego.length / 5.0, ego.width / 2.0});
}

Tensor agent_features(const std::vector<AgentBox> & agents)
{
  std::vector<double> v;
  v.reserve(agents.size() * kAgentFeatures);
  for (const auto & a : agents) {
    v.insert(v.end(), {a.x / 32.0, a.y / 32.0, std::cos(a.theta), std::sin(a.theta), a.w / 2.0,
                       a.h / 5.0, a.velocity().norm() / 10.0});
  }
  return Tensor::from_values({agents.size(), kAgentFeatures}, std::move(v));
}

Tensor pool_waypoints(const Tensor & waypoint_features, const EgoState & ego, const PlannerParams & params)
{
  const std::size_t d = params.width();
  if (waypoint_features.rank() != 2 || waypoint_features.dim(1) != d ||
      waypoint_features.dim(0) % kHorizonSteps != 0) {
    throw std::invalid_argument(
      "pool_waypoints: expected [M*8 x " + std::to_string(d) + "], got " +
      nn::shape_string(waypoint_features.shape()));
  }
  const std::size_t m = waypoint_features.dim(0) / kHorizonSteps;
  if (m == 0) {
    return Tensor::zeros({0, d});
  }
  const Tensor q = params.ego_query.forward(ego_features(ego));
  const Tensor tokens = nn::add(waypoint_features, nn::tile_rows(params.waypoint_embedding, m));
  const Tensor scores = nn::reshape(nn::matmul(tokens, nn::transpose(q)), {m, kHorizonSteps});
  const Tensor weights = nn::softmax_rows(nn::scale(scores, 1.0 / std::sqrt(static_cast<double>(d))));
  return nn::add_rowwise(nn::grouped_weighted_sum(weights, tokens), q);
}

Tensor embed_candidates(
  const Tensor & feature_grid, std::span<const Trajectory> trajs, const EgoState & ego,
  const PlannerParams & params, const BevGridSpec & spec)
{
  if (feature_grid.rank() != 3 || feature_grid.dim(0) != params.width()) {
    throw std::invalid_argument("embed_candidates: feature grid width does not match the planner");
  }
  const auto points = waypoint_samples(trajs, spec);
  return pool_waypoints(nn::bilinear_sample(feature_grid, points), ego, params);
}

Tensor sample_inputs(const Tensor & input_grid, std::span<const Trajectory> trajs, const BevGridSpec & spec)
{
  const auto points = waypoint_samples(trajs, spec);
  return nn::bilinear_sample(input_grid.detach(), points);
}

Tensor embed_from_samples(const Tensor & samples, const EgoState & ego, const PlannerParams & params)
{
  return pool_waypoints(params.bev_encoder.forward(samples), ego, params);
}

Tensor refine_with_agents(const Tensor & fv, const std::vector<AgentBox> & agents, const PlannerParams & params)
{
  if (agents.empty()) {
    return fv;
  }
  const Tensor fa = params.agent_encoder.forward(agent_features(agents));
  const Tensor q = nn::matmul(fv, params.wq);
  const Tensor k = nn::matmul(fa, params.wk);
  const Tensor v = nn::matmul(fa, params.wv);
  return nn::add(fv, nn::attention(q, k, v));
}

Tensor decode_offsets(const Tensor & embeddings, const PlannerParams & params)
{
  static const auto bounds = [] {
    std::pair<std::vector<double>, std::vector<double>> b;
    for (std::size_t k = 0; k < kHorizonSteps; ++k) {
      b.first.insert(b.first.end(), {-kMaxOffsetMeters, -kMaxOffsetMeters, -kMaxOffsetRadians});
      b.second.insert(b.second.end(), {kMaxOffsetMeters, kMaxOffsetMeters, kMaxOffsetRadians});
    }
    return b;
  }();
  return nn::clamp_columns(params.offset_head.forward(embeddings), bounds.first, bounds.second);
}

Trajectory apply_offsets(const Trajectory & base, std::span<const double> offsets)
{
  if (offsets.size() != kOffsetComponents) {
    throw std::invalid_argument("apply_offsets: expected 24 offset components");
  }
  Trajectory out = base;
  for (std::size_t k = 0; k < kHorizonSteps; ++k) {
    Waypoint & w = out.waypoints[k];
    w.x += offsets[3 * k];
    w.y += offsets[3 * k + 1];
    w.theta = wrap_angle(w.theta + offsets[3 * k + 2]);
  }
  return out;
}

std::vector<Trajectory> apply_offsets(std::span<const Trajectory> bases, const Tensor & offsets)
{
  if (offsets.rank() != 2 || offsets.dim(0) != bases.size() || offsets.dim(1) != kOffsetComponents) {
    throw std::invalid_argument("apply_offsets: offsets must be [n x 24] for n trajectories");
  }
  std::vector<Trajectory> out;
  out.reserve(bases.size());
  for (std::size_t i = 0; i < bases.size(); ++i) {
    out.push_back(apply_offsets(bases[i], offsets.values().subspan(i * kOffsetComponents, kOffsetComponents)));
  }
  return out;
}

Tensor imitation_loss(const Tensor & offset_row, const Trajectory & base, const Trajectory & expert)
{
  if (offset_row.size() != kOffsetComponents) {
    throw std::invalid_argument("imitation_loss: expected a [1 x 24] offset row");
  }
  std::vector<double> base_values(kOffsetComponents);
  for (std::size_t k = 0; k < kHorizonSteps; ++k) {
    base_values[3 * k] = base.waypoints[k].x;
    base_values[3 * k + 1] = base.waypoints[k].y;
    base_values[3 * k + 2] = base.waypoints[k].theta;
  }
  const Tensor pred =
    nn::add(nn::reshape(offset_row, {1, kOffsetComponents}), Tensor::from_values({1, kOffsetComponents}, base_values));
  std::vector<double> target(kOffsetComponents);
  for (std::size_t k = 0; k < kHorizonSteps; ++k) {
    target[3 * k] = expert.waypoints[k].x;
    target[3 * k + 1] = expert.waypoints[k].y;
    // Shift the heading target so pred - target is the wrapped angular residual.
    const double p = pred.values()[3 * k + 2];
    target[3 * k + 2] = p - wrap_angle(p - expert.waypoints[k].theta);
  }
  return nn::smooth_l1_mean(pred, target);
}

}  // namespace vocabplan
