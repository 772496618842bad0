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

#include "vocabplan/scene_gen.hpp"

#include "vocabplan/core/geometry.hpp"
#include "vocabplan/core/grid.hpp"
#include "vocabplan/core/random.hpp"
#include "vocabplan/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>

namespace vocabplan
{

namespace
{

constexpr double kLatAccelLimit = 2.5;  // expert comfort, m/s^2
constexpr double kPlanDecel = 2.0;
constexpr double kMaxAccel = 1.5;
constexpr double kMaxDecel = 3.0;
constexpr double kJerkLimit = 4.0;
constexpr double kSimStep = 0.01;
constexpr double kEnvelopeStep = 0.25;
constexpr double kSpeedCap = 20.0;

struct Pose
{
  Vec2 p{};
  double heading{0.0};
};

/// Piecewise line/arc path parametrized by arc length; extrapolates straight past both ends.
class Path
{
public:
  explicit Path(Pose start) : start_(start) {}

  Path & line(double length) { return add(length, 0.0); }
  Path & arc(double radius, double angle)
  {
    return add(radius * std::abs(angle), angle > 0.0 ? 1.0 / radius : -1.0 / radius);
  }

  double length() const
  {
    double total = 0.0;
    for (const auto & piece : pieces_) total += piece.length;
    return total;
  }

  double curvature_at(double s) const
  {
    double base = 0.0;
    for (const auto & piece : pieces_) {
      if (s >= base && s < base + piece.length) return piece.curvature;
      base += piece.length;
    }
    return 0.0;
  }

  Pose pose_at(double s) const
  {
    Pose pose = start_;
    if (s <= 0.0) {
      pose.p += Vec2{std::cos(pose.heading), std::sin(pose.heading)} * s;
      return pose;
    }
    double remaining = s;
    for (const auto & piece : pieces_) {
      const double step = std::min(remaining, piece.length);
      pose = advance(pose, step, piece.curvature);
      remaining -= step;
      if (remaining <= 0.0) return pose;
    }
    return advance(pose, remaining, 0.0);
  }

  /// Samples every `spacing` meters from arc 0 to the end (end included), shifted left by `offset`.
  std::vector<Vec2> sample(double spacing, double offset = 0.0) const
  {
    std::vector<Vec2> out;
    const double total = length();
    const auto n = static_cast<std::size_t>(std::floor(total / spacing));
    for (std::size_t i = 0; i <= n; ++i) {
      out.push_back(offset_point(static_cast<double>(i) * spacing, offset));
    }
    if (total - static_cast<double>(n) * spacing > 1e-9) {
      out.push_back(offset_point(total, offset));
    }
    return out;
  }

private:
  struct Piece
  {
    double length;
    double curvature;
  };

  Path & add(double length, double curvature)
  {
    pieces_.push_back({length, curvature});
    return *this;
  }

  static Pose advance(Pose pose, double ds, double k)
  {
    const double h = pose.heading;
    if (k == 0.0) {
      pose.p += Vec2{std::cos(h), std::sin(h)} * ds;
    } else {
      pose.p += Vec2{(std::sin(h + k * ds) - std::sin(h)) / k, (std::cos(h) - std::cos(h + k * ds)) / k};
      pose.heading = h + k * ds;
    }
    return pose;
  }

  Vec2 offset_point(double s, double offset) const
  {
    const Pose pose = pose_at(s);
    return pose.p + Vec2{-std::sin(pose.heading), std::cos(pose.heading)} * offset;
  }

  Pose start_;
  std::vector<Piece> pieces_;
};

struct LaneSpec
{
  Path path;
  double offset;
  int direction;
  bool connector;
};

struct RoadLayout
{
  std::vector<LaneSpec> lanes;
  Path route{Pose{}};
  double lane_width{3.0};
  std::optional<std::pair<Vec2, Vec2>> stop_line;
};

RoadLayout build_layout(RoadFamily family, double lane_width, Rng & rng)
{
  RoadLayout layout;
  layout.lane_width = lane_width;
  const double L = lane_width;
  const Pose origin_back{{-40.0, 0.0}, 0.0};
  switch (family) {
    case RoadFamily::straight: {
      Path ego(origin_back);
      ego.line(140.0);
      layout.lanes.push_back({ego, 0.0, 1, false});
      layout.lanes.push_back({ego, L, -1, false});
      layout.route = ego;
      break;
    }
    case RoadFamily::curve_left:
    case RoadFamily::curve_right: {
      const double radius = rng.uniform(25.0, 80.0);
      const double sign = family == RoadFamily::curve_left ? 1.0 : -1.0;
      Path ego(origin_back);
      ego.line(40.0).arc(radius, sign * kPi / 2.0).line(60.0);
      layout.lanes.push_back({ego, 0.0, 1, false});
      layout.lanes.push_back({ego, L, -1, false});
      layout.route = ego;
      break;
    }
    case RoadFamily::t_intersection: {
      const double xc = rng.uniform(std::max(12.0, 1.5 * L + 6.0), 35.0);
      Path ego(origin_back);
      ego.line(40.0 + xc - L);
      layout.lanes.push_back({ego, 0.0, 1, false});
      layout.lanes.push_back({ego, L, -1, false});
      Path south(Pose{{xc - L / 2.0, 60.0}, -kPi / 2.0});
      south.line(120.0);
      Path north(Pose{{xc + L / 2.0, -60.0}, kPi / 2.0});
      north.line(120.0);
      layout.lanes.push_back({south, 0.0, 1, false});
      layout.lanes.push_back({north, 0.0, 1, false});
      const Pose turn_start{{xc - 1.5 * L, 0.0}, 0.0};
      Path right(turn_start);
      right.arc(L, -kPi / 2.0);
      Path left(turn_start);
      left.arc(2.0 * L, kPi / 2.0);
      layout.lanes.push_back({right, 0.0, 1, true});
      layout.lanes.push_back({left, 0.0, 1, true});
      const bool turn_left = rng.bernoulli(0.5);
      Path route(origin_back);
      route.line(40.0 + xc - 1.5 * L);
      if (turn_left) {
        route.arc(2.0 * L, kPi / 2.0);
      } else {
        route.arc(L, -kPi / 2.0);
      }
      route.line(60.0);
      layout.route = route;
      layout.stop_line = std::make_pair(Vec2{xc - L, -L / 2.0}, Vec2{xc - L, L / 2.0});
      break;
    }
  }
  return layout;
}

DrivableMask rasterize_corridors(const std::vector<Lane> & lanes, double half_width, const BevGridSpec & grid)
{
  DrivableMask mask(grid.cells_x, grid.cells_y, false);
  const double csx = grid.cell_size_x();
  const double csy = grid.cell_size_y();
  for (const auto & lane : lanes) {
    for (std::size_t i = 0; i + 1 < lane.points.size(); ++i) {
      const Vec2 a = lane.points[i];
      const Vec2 b = lane.points[i + 1];
      const double x_lo = std::min(a.x, b.x) - half_width;
      const double x_hi = std::max(a.x, b.x) + half_width;
      const double y_lo = std::min(a.y, b.y) - half_width;
      const double y_hi = std::max(a.y, b.y) + half_width;
      const int u_lo = std::max(0, static_cast<int>(std::floor((x_lo + grid.extent_x / 2.0) / csx)));
      const int u_hi = std::min(grid.cells_x - 1, static_cast<int>(std::floor((x_hi + grid.extent_x / 2.0) / csx)));
      const int v_lo = std::max(0, static_cast<int>(std::floor((y_lo + grid.extent_y / 2.0) / csy)));
      const int v_hi = std::min(grid.cells_y - 1, static_cast<int>(std::floor((y_hi + grid.extent_y / 2.0) / csy)));
      for (int v = v_lo; v <= v_hi; ++v) {
        for (int u = u_lo; u <= u_hi; ++u) {
          if (!mask.at(u, v) && point_segment_distance(cell_center(u, v, grid), a, b) <= half_width) {
            mask.set(u, v, true);
          }
        }
      }
    }
  }
  return mask;
}

/// Speed limit envelope along the route: curvature limit, target speed, optional stop, then a
/// backward deceleration pass.
struct SpeedEnvelope
{
  double s0{0.0};
  std::vector<double> v;

  double at(double s) const
  {
    const double x = (s - s0) / kEnvelopeStep;
    if (x <= 0.0) return v.front();
    const auto i = static_cast<std::size_t>(x);
    if (i + 1 >= v.size()) return v.back();
    const double f = x - static_cast<double>(i);
    return v[i] * (1.0 - f) + v[i + 1] * f;
  }
};

SpeedEnvelope speed_envelope(const Path & route, double s0, double target, std::optional<double> s_stop)
{
  SpeedEnvelope env;
  env.s0 = s0;
  const std::size_t n = static_cast<std::size_t>(100.0 / kEnvelopeStep) + 1;
  env.v.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = s0 + static_cast<double>(i) * kEnvelopeStep;
    double lim = std::min(target, kSpeedCap);
    // Look slightly ahead so the car is already slow when it enters a bend.
    for (double ds : {0.0, 2.5, 5.0}) {
      const double k = std::abs(route.curvature_at(s + ds));
      if (k > 0.0) lim = std::min(lim, std::sqrt(kLatAccelLimit / k));
    }
    if (s_stop && s >= *s_stop) lim = 0.0;
    env.v[i] = lim;
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    env.v[i] = std::min(env.v[i], std::sqrt(env.v[i + 1] * env.v[i + 1] + 2.0 * kPlanDecel * kEnvelopeStep));
  }
  return env;
}

struct ExpertPlan
{
  Trajectory traj;
  double initial_accel{0.0};
};

ExpertPlan simulate_expert(const Path & route, double s0, double v0, const SpeedEnvelope & env)
{
  ExpertPlan plan;
  double s = s0;
  double v = v0;
  const auto command = [&](double s_now, double v_now) {
    const double desired = std::min(env.at(s_now), env.at(s_now + 0.5 * v_now));
    return std::clamp(1.2 * (desired - v_now), -kMaxDecel, kMaxAccel);
  };
  double a = std::clamp(command(s, v), -1.0, 1.0);
  plan.initial_accel = a;
  const auto steps_per_waypoint = static_cast<int>(std::lround(kStepSeconds / kSimStep));
  for (std::size_t k = 0; k < kHorizonSteps; ++k) {
    for (int i = 0; i < steps_per_waypoint; ++i) {
      const double cmd = command(s, v);
      a = std::clamp(cmd, a - kJerkLimit * kSimStep, a + kJerkLimit * kSimStep);
      double v_next = v + a * kSimStep;
      if (v_next < 0.0) {
        v_next = 0.0;
        a = 0.0;
      }
      s += 0.5 * (v + v_next) * kSimStep;
      v = v_next;
    }
    const Pose pose = route.pose_at(s);
    plan.traj.waypoints[k] = {pose.p.x, pose.p.y, wrap_angle(pose.heading)};
  }
  return plan;
}

Lane to_lane(const LaneSpec & spec)
{
  Lane lane;
  lane.points = spec.path.sample(1.0, spec.offset);
  lane.direction = spec.direction;
  return lane;
}

bool expert_is_clean(const Scene & scene)
{
  const MetricVector m = eval_all(scene, scene.expert);
  return m.nc == 1.0 && m.dac == 1.0 && m.ddc == 1.0 && m.tlc == 1.0 && m.ttc == 1.0 &&
         m.lk == 1.0 && m.hc == 1.0;
}

OrientedBox ego_box_now(const EgoState & ego) { return {{0.0, 0.0}, 0.0, ego.length, ego.width}; }

OrientedBox inflated(OrientedBox box, double margin)
{
  box.length += 2.0 * margin;
  box.width += 2.0 * margin;
  return box;
}

std::optional<AgentBox> place_agent(
  const std::vector<LaneSpec> & specs, const Scene & scene, const SceneConfig & config, Rng & rng)
{
  std::vector<const LaneSpec *> travel;
  for (const auto & spec : specs) {
    if (!spec.connector) travel.push_back(&spec);
  }
  const double half_x = config.grid.extent_x / 2.0 - 2.0;
  const double half_y = config.grid.extent_y / 2.0 - 2.0;
  for (int attempt = 0; attempt < 30; ++attempt) {
    const LaneSpec & spec = *travel[rng.index(travel.size())];
    const double s = rng.uniform(0.0, spec.path.length());
    const Pose pose = spec.path.pose_at(s);
    const Vec2 normal{-std::sin(pose.heading), std::cos(pose.heading)};
    const Vec2 center = pose.p + normal * spec.offset;
    const bool parked = rng.bernoulli(config.parked_fraction);
    AgentBox agent;
    agent.w = rng.uniform(1.7, 2.1);
    agent.h = rng.uniform(4.0, 5.2);
    const double speed = parked ? 0.0 : rng.uniform(2.0, 12.0);
    if (std::abs(center.x) > half_x || std::abs(center.y) > half_y) {
      continue;
    }
    const double heading = wrap_angle(spec.direction > 0 ? pose.heading : pose.heading + kPi);
    agent.x = center.x;
    agent.y = center.y;
    agent.theta = heading;
    agent.vx = speed * std::cos(heading);
    agent.vy = speed * std::sin(heading);

    const OrientedBox box = agent_box_at(agent, 0.0);
    if (boxes_overlap(inflated(box, 0.5), inflated(ego_box_now(scene.ego), 1.0))) {
      continue;
    }
    bool clash = false;
    for (const auto & other : scene.agents) {
      if (boxes_overlap(inflated(box, 0.5), agent_box_at(other, 0.0))) {
        clash = true;
        break;
      }
    }
    if (clash) continue;
    Scene probe;
    probe.grid = scene.grid;
    probe.ego = scene.ego;
    probe.agents = {agent};
    if (eval_nc(probe, scene.expert) != 1.0 || eval_ttc(probe, scene.expert) != 1.0) {
      continue;
    }
    return agent;
  }
  return std::nullopt;
}

std::optional<Scene> attempt_scene(const SceneConfig & config, std::size_t index, Rng & rng)
{
  Scene scene;
  scene.id = scene_id(index);
  scene.grid = config.grid;
  scene.family = config.families[rng.index(config.families.size())];
  const double road_width = rng.uniform(config.min_drivable_width, config.max_drivable_width);
  const double lane_width = road_width / 2.0;
  RoadLayout layout = build_layout(scene.family, lane_width, rng);

  for (const auto & spec : layout.lanes) scene.lanes.push_back(to_lane(spec));
  scene.drivable = rasterize_corridors(scene.lanes, lane_width / 2.0, scene.grid);
  scene.route.points = layout.route.sample(1.0);

  const double s0 = 40.0;
  const SpeedEnvelope free_env = speed_envelope(layout.route, s0, kSpeedCap, std::nullopt);
  const double v_hi = std::min(config.max_ego_speed, free_env.at(s0));
  if (v_hi < config.min_ego_speed) {
    return std::nullopt;
  }
  const double v0 = rng.uniform(config.min_ego_speed, v_hi);
  const double target = rng.uniform(
    std::max(config.min_ego_speed, v0 - 3.0), std::min(config.max_ego_speed, v0 + 3.0));

  std::optional<double> s_stop;
  if (layout.stop_line && rng.bernoulli(config.traffic_light_probability)) {
    TrafficLight light;
    light.stop_a = layout.stop_line->first;
    light.stop_b = layout.stop_line->second;
    const double stop_at = s0 + light.stop_a.x - scene.ego.length / 2.0 - 1.5;
    const double room = stop_at - s0;
    const bool can_stop = room > 1.0 && v0 * v0 / (2.0 * room) <= 0.9 * kPlanDecel;
    const bool red = rng.bernoulli(config.red_light_probability);
    light.state = red && can_stop ? LightState::red : LightState::green;
    if (light.state == LightState::red) s_stop = stop_at;
    scene.traffic_lights.push_back(light);
  }

  const SpeedEnvelope env = speed_envelope(layout.route, s0, std::max(target, 0.0), s_stop);
  const ExpertPlan plan = simulate_expert(layout.route, s0, v0, env);
  scene.expert = plan.traj;
  scene.ego.velocity = {v0, 0.0};
  scene.ego.acceleration = {plan.initial_accel, 0.0};

  const double start = project_onto_polyline(scene.route.points, Vec2{0.0, 0.0}).arc_length;
  const double end =
    project_onto_polyline(scene.route.points, scene.expert.waypoints.back().position()).arc_length;
  scene.route.reference_progress = std::max(1.0, end - start);

  const std::size_t agent_count =
    config.min_agents + rng.index(config.max_agents - config.min_agents + 1);
  for (std::size_t i = 0; i < agent_count; ++i) {
    if (auto agent = place_agent(layout.lanes, scene, config, rng)) {
      scene.agents.push_back(*agent);
    }
  }
  if (scene.agents.size() < config.min_agents) {
    return std::nullopt;
  }
  if (!expert_is_clean(scene)) {
    return std::nullopt;
  }
  return scene;
}

bool corners_leave_mask(const Scene & scene, const Trajectory & traj)
{
  // Same 1e-9 m inset as the drivable-area metric.
  const double hl = scene.ego.length / 2.0 - 1e-9;
  const double hw = scene.ego.width / 2.0 - 1e-9;
  for (const auto & w : traj.waypoints) {
    const double c = std::cos(w.theta);
    const double s = std::sin(w.theta);
    for (double a : {hl, -hl}) {
      for (double b : {hw, -hw}) {
        const Vec2 corner{w.x + a * c - b * s, w.y + a * s + b * c};
        const auto cell = cell_of(corner, scene.grid);
        if (cell && !scene.drivable.at(cell->u, cell->v)) {
          return true;
        }
      }
    }
  }
  return false;
}

bool exceeds_comfort(const Scene & scene, const Trajectory & traj)
{
  // Second and third differences of positions, compared against the default comfort bounds.
  const OracleConfig bounds{};
  const double dt = Trajectory::dt;
  std::array<Vec2, kHorizonSteps + 1> p{};
  for (std::size_t k = 0; k < kHorizonSteps; ++k) p[k + 1] = traj.waypoints[k].position();
  std::array<Vec2, kHorizonSteps> vel{};
  for (std::size_t k = 0; k < kHorizonSteps; ++k) vel[k] = (p[k + 1] - p[k]) / dt;
  const auto frame_violation = [&](const Vec2 & acc, double theta) {
    const double lon = acc.x * std::cos(theta) + acc.y * std::sin(theta);
    const double lat = -acc.x * std::sin(theta) + acc.y * std::cos(theta);
    return lon < bounds.hc_min_lon_accel || lon > bounds.hc_max_lon_accel ||
           std::abs(lat) > bounds.hc_max_lat_accel;
  };
  if (frame_violation((vel[0] - scene.ego.velocity) / dt, traj.waypoints[0].theta)) return true;
  std::array<Vec2, kHorizonSteps - 1> acc{};
  for (std::size_t k = 0; k + 1 < kHorizonSteps; ++k) {
    acc[k] = (vel[k + 1] - vel[k]) / dt;
    if (frame_violation(acc[k], traj.waypoints[k + 1].theta)) return true;
  }
  for (std::size_t k = 0; k + 2 < kHorizonSteps; ++k) {
    if (((acc[k + 1] - acc[k]) / dt).norm() > bounds.hc_max_jerk) return true;
  }
  return false;
}

Trajectory zigzag(const Trajectory & traj, double amplitude)
{
  Trajectory out = traj;
  for (std::size_t k = 0; k < kHorizonSteps; ++k) {
    const Waypoint & w = traj.waypoints[k];
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    out.waypoints[k].x = w.x - sign * amplitude * std::sin(w.theta);
    out.waypoints[k].y = w.y + sign * amplitude * std::cos(w.theta);
  }
  return out;
}

Trajectory with_heading_noise(const Trajectory & traj, double sigma, Rng & rng)
{
  Trajectory out = traj;
  if (sigma <= 0.0) return out;
  for (auto & w : out.waypoints) w.theta = wrap_angle(w.theta + rng.normal(0.0, sigma));
  return out;
}

}  // namespace

void validate_scene_config(const SceneConfig & c)
{
  const auto fail = [](const std::string & what) { throw std::invalid_argument("scene config: " + what); };
  if (c.min_agents > c.max_agents) fail("min_agents exceeds max_agents");
  if (c.families.empty()) fail("families must not be empty");
  if (!(c.min_ego_speed >= 0.0) || !(c.max_ego_speed >= c.min_ego_speed) || c.max_ego_speed > kSpeedCap) {
    fail("ego speed range must satisfy 0 <= min <= max <= 20");
  }
  for (double p : {c.traffic_light_probability, c.red_light_probability, c.parked_fraction}) {
    if (!(p >= 0.0 && p <= 1.0)) fail("probabilities must lie in [0, 1]");
  }
  if (!(c.min_drivable_width > 2.0 * kDefaultEgoWidth) || !(c.max_drivable_width >= c.min_drivable_width) ||
      c.max_drivable_width > 20.0) {
    fail("drivable width range must satisfy 3.8 < min <= max <= 20");
  }
  if (c.max_retries == 0) fail("max_retries must be positive");
  if (c.grid.cells_x <= 0 || c.grid.cells_y <= 0 || !(c.grid.extent_x > 0.0) || !(c.grid.extent_y > 0.0)) {
    fail("grid must have positive size");
  }
}

std::string scene_id(std::size_t index)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "scene_%06zu", index);
  return buf;
}

Scene generate_scene(const SceneConfig & config, std::size_t index)
{
  validate_scene_config(config);
  Rng rng(mix_seed(config.seed, index));
  for (std::size_t attempt = 0; attempt < config.max_retries; ++attempt) {
    if (auto scene = attempt_scene(config, index, rng)) {
      return std::move(*scene);
    }
  }
  throw GenerationError("no valid scene for index " + std::to_string(index) + " after " +
                        std::to_string(config.max_retries) + " attempts");
}

Trajectory speed_scaled(const Trajectory & expert, double scale)
{
  if (scale == 1.0) return expert;
  std::array<Vec2, kHorizonSteps + 1> p{};
  std::array<double, kHorizonSteps + 1> arc{};
  for (std::size_t k = 0; k < kHorizonSteps; ++k) {
    p[k + 1] = expert.waypoints[k].position();
    arc[k + 1] = arc[k] + (p[k + 1] - p[k]).norm();
  }
  Trajectory out = expert;
  for (std::size_t k = 0; k < kHorizonSteps; ++k) {
    const double target = scale * arc[k + 1];
    Waypoint & w = out.waypoints[k];
    Vec2 pos = p[kHorizonSteps];
    w.theta = expert.waypoints.back().theta;
    if (target <= arc[kHorizonSteps]) {
      std::size_t i = 0;
      while (target > arc[i + 1]) ++i;
      const double len = arc[i + 1] - arc[i];
      pos = len > 0.0 ? p[i] + (p[i + 1] - p[i]) * ((target - arc[i]) / len) : p[i + 1];
      w.theta = expert.waypoints[i].theta;
    } else {
      // Past the end: continue along the last segment that moved.
      for (std::size_t j = kHorizonSteps; j-- > 0;) {
        const double len = arc[j + 1] - arc[j];
        if (len > 1e-9) {
          pos = p[kHorizonSteps] + (p[j + 1] - p[j]) * ((target - arc[kHorizonSteps]) / len);
          break;
        }
      }
    }
    w.x = pos.x;
    w.y = pos.y;
  }
  return out;
}

Trajectory laterally_offset(const Trajectory & traj, double offset)
{
  Trajectory out = traj;
  if (offset == 0.0) return out;
  for (std::size_t k = 0; k < kHorizonSteps; ++k) {
    const Waypoint & w = traj.waypoints[k];
    const double o = offset * std::min(1.0, static_cast<double>(k + 1) / 3.0);
    out.waypoints[k].x = w.x - o * std::sin(w.theta);
    out.waypoints[k].y = w.y + o * std::cos(w.theta);
  }
  return out;
}

AdversarialSet generate_adversarial_candidates(
  const Scene & scene, std::size_t n, std::uint64_t seed, const AdversarialConfig & config)
{
  if (n == 0) {
    throw std::invalid_argument("generate_adversarial_candidates: n must be at least 1");
  }
  Rng rng(seed);
  AdversarialSet out;
  const auto push = [&](const Trajectory & t) {
    out.trajectories.push_back(t);
    out.dac_violation.push_back(corners_leave_mask(scene, t));
    out.hc_violation.push_back(exceeds_comfort(scene, t));
  };

  // Drivable-area violator: widest offsets first, either side.
  {
    const double m = config.max_lateral_offset;
    Trajectory chosen = laterally_offset(scene.expert, -m);
    for (double frac : {1.0, 0.75, 0.5}) {
      bool found = false;
      for (double sign : {-1.0, 1.0}) {
        const Trajectory t = laterally_offset(scene.expert, sign * frac * m);
        if (corners_leave_mask(scene, t)) {
          chosen = t;
          found = true;
          break;
        }
      }
      if (found) break;
    }
    push(chosen);
  }
  if (out.trajectories.size() < n) {
    Trajectory t = speed_scaled(scene.expert, config.max_speed_scale);
    if (!exceeds_comfort(scene, t)) {
      t = zigzag(scene.expert, config.max_lateral_offset / 4.0);
    }
    push(t);
  }
  while (out.trajectories.size() < n) {
    Trajectory t = scene.expert;
    if (rng.bernoulli(0.6)) {
      t = speed_scaled(t, rng.uniform(config.min_speed_scale, config.max_speed_scale));
    }
    if (rng.bernoulli(0.6)) {
      t = laterally_offset(t, rng.uniform(-config.max_lateral_offset, config.max_lateral_offset));
    }
    if (rng.bernoulli(0.4)) {
      t = with_heading_noise(t, config.heading_noise, rng);
    }
    push(t);
  }
  return out;
}

}  // namespace vocabplan
