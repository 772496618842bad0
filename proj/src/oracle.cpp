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

#include "vocabplan/oracle.hpp"

#include "vocabplan/core/geometry.hpp"
#include "vocabplan/core/grid.hpp"
#include "vocabplan/core/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace vocabplan
{

namespace
{

struct NearestLane
{
  const Lane * lane{nullptr};
  PolylineProjection projection{};
};

NearestLane nearest_lane(const Scene & scene, const Vec2 & p)
{
  NearestLane best;
  double best_distance = std::numeric_limits<double>::infinity();
  for (const auto & lane : scene.lanes) {
    if (lane.points.size() < 2) {
      continue;
    }
    const auto proj = project_onto_polyline(lane.points, p);
    if (proj.distance < best_distance) {
      best_distance = proj.distance;
      best.lane = &lane;
      best.projection = proj;
    }
  }
  return best;
}

Vec2 heading_vector(double theta) { return {std::cos(theta), std::sin(theta)}; }

bool in_set(double v, std::initializer_list<double> allowed)
{
  for (double a : allowed) {
    if (v == a) return true;
  }
  return false;
}

}  // namespace

MetricKind metric_kind(MetricId id)
{
  switch (id) {
    case MetricId::nc:
    case MetricId::ddc:
      return MetricKind::ternary;
    case MetricId::ep:
      return MetricKind::continuous;
    default:
      return MetricKind::binary;
  }
}

const char * metric_key(MetricId id)
{
  switch (id) {
    case MetricId::nc: return "nc";
    case MetricId::dac: return "dac";
    case MetricId::ddc: return "ddc";
    case MetricId::tlc: return "tlc";
    case MetricId::ep: return "ep";
    case MetricId::ttc: return "ttc";
    case MetricId::lk: return "lk";
    case MetricId::hc: return "hc";
  }
  throw std::invalid_argument("metric_key: unknown metric");
}

const char * metric_report_name(MetricId id)
{
  switch (id) {
    case MetricId::nc: return "no_at_fault_collisions";
    case MetricId::dac: return "drivable_area_compliance";
    case MetricId::ddc: return "driving_direction_compliance";
    case MetricId::tlc: return "traffic_light_compliance";
    case MetricId::ep: return "ego_progress";
    case MetricId::ttc: return "time_to_collision_within_bound";
    case MetricId::lk: return "lane_keeping";
    case MetricId::hc: return "history_comfort";
  }
  throw std::invalid_argument("metric_report_name: unknown metric");
}

double MetricVector::get(MetricId id) const
{
  switch (id) {
    case MetricId::nc: return nc;
    case MetricId::dac: return dac;
    case MetricId::ddc: return ddc;
    case MetricId::tlc: return tlc;
    case MetricId::ep: return ep;
    case MetricId::ttc: return ttc;
    case MetricId::lk: return lk;
    case MetricId::hc: return hc;
  }
  throw std::invalid_argument("MetricVector::get: unknown metric");
}

void MetricVector::set(MetricId id, double value)
{
  switch (id) {
    case MetricId::nc: nc = value; return;
    case MetricId::dac: dac = value; return;
    case MetricId::ddc: ddc = value; return;
    case MetricId::tlc: tlc = value; return;
    case MetricId::ep: ep = value; return;
    case MetricId::ttc: ttc = value; return;
    case MetricId::lk: lk = value; return;
    case MetricId::hc: hc = value; return;
  }
  throw std::invalid_argument("MetricVector::set: unknown metric");
}

void validate_metric_vector(const MetricVector & m)
{
  for (MetricId id : kAllMetrics) {
    const double v = m.get(id);
    bool ok = false;
    switch (metric_kind(id)) {
      case MetricKind::ternary: ok = in_set(v, {0.0, 0.5, 1.0}); break;
      case MetricKind::binary: ok = in_set(v, {0.0, 1.0}); break;
      case MetricKind::continuous: ok = std::isfinite(v) && v >= 0.0 && v <= 1.0; break;
    }
    if (!ok) {
      throw std::invalid_argument(
        std::string("metric ") + metric_key(id) + " has invalid value " + std::to_string(v));
    }
  }
}

double eval_nc(const Scene & scene, const Trajectory & traj, const OracleConfig & config)
{
  const auto profile = kinematics(traj, scene.ego);
  bool any_contact = false;
  for (const auto & agent : scene.agents) {
    for (std::size_t k = 0; k < kHorizonSteps; ++k) {
      const double t = static_cast<double>(k + 1) * Trajectory::dt;
      const OrientedBox ego_box = ego_footprint(traj, scene.ego, k);
      const OrientedBox agent_box = agent_box_at(agent, t);
      if (!boxes_overlap(ego_box, agent_box)) {
        continue;
      }
      const bool moving = profile.speed[k] > config.at_fault_min_speed;
      const bool in_front =
        (agent_box.center - ego_box.center).dot(heading_vector(ego_box.heading)) > 0.0;
      if (moving && in_front) {
        return 0.0;
      }
      any_contact = true;
      break;
    }
  }
  return any_contact ? 0.5 : 1.0;
}

double eval_dac(const Scene & scene, const Trajectory & traj, const OracleConfig &)
{
  // Corners are looked up slightly inside the footprint, so a footprint that only touches the
  // mask boundary from the inside stays compliant on every side of a cell.
  constexpr double kInset = 1e-9;
  for (std::size_t k = 0; k < kHorizonSteps; ++k) {
    OrientedBox box = ego_footprint(traj, scene.ego, k);
    box.length -= 2.0 * kInset;
    box.width -= 2.0 * kInset;
    for (const auto & c : box.corners()) {
      if (!is_drivable(scene.drivable, scene.grid, c)) {
        return 0.0;
      }
    }
  }
  return 1.0;
}

double against_traffic_distance(const Scene & scene, const Trajectory & traj)
{
  double total = 0.0;
  for (std::size_t k = 0; k < kHorizonSteps; ++k) {
    const Waypoint & w = traj.waypoints[k];
    const double step = (w.position() - previous_position(traj, k)).norm();
    if (step == 0.0) {
      continue;
    }
    const NearestLane near = nearest_lane(scene, w.position());
    if (near.lane == nullptr) {
      continue;
    }
    const Vec2 flow = near.projection.tangent * static_cast<double>(near.lane->direction);
    if (heading_vector(w.theta).dot(flow) < 0.0) {
      total += step;
    }
  }
  return total;
}

double eval_ddc(const Scene & scene, const Trajectory & traj, const OracleConfig & config)
{
  const double d = against_traffic_distance(scene, traj);
  if (d < config.ddc_full_credit) return 1.0;
  if (d < config.ddc_half_credit) return 0.5;
  return 0.0;
}

double eval_tlc(const Scene & scene, const Trajectory & traj, const OracleConfig &)
{
  for (const auto & light : scene.traffic_lights) {
    if (light.state != LightState::red) {
      continue;
    }
    for (std::size_t k = 0; k < kHorizonSteps; ++k) {
      if (segments_intersect(
            previous_position(traj, k), traj.waypoints[k].position(), light.stop_a, light.stop_b)) {
        return 0.0;
      }
    }
  }
  return 1.0;
}

double eval_ep(const Scene & scene, const Trajectory & traj, const OracleConfig &)
{
  if (!(scene.route.reference_progress > 0.0)) {
    throw std::invalid_argument("eval_ep: reference progress must be positive");
  }
  const auto & route = scene.route.points;
  const double start = project_onto_polyline(route, Vec2{0.0, 0.0}).arc_length;
  const double end = project_onto_polyline(route, traj.waypoints.back().position()).arc_length;
  const double ratio = (end - start) / scene.route.reference_progress;
  return std::clamp(ratio, 0.0, 1.0);
}

double eval_ttc(const Scene & scene, const Trajectory & traj, const OracleConfig & config)
{
  if (scene.agents.empty()) {
    return 1.0;
  }
  if (!(config.ttc_substep > 0.0)) {
    throw std::invalid_argument("eval_ttc: sub-step must be positive");
  }
  const auto profile = kinematics(traj, scene.ego);
  const auto substeps =
    static_cast<std::size_t>(std::floor(config.ttc_horizon / config.ttc_substep + 0.5));
  for (std::size_t k = 0; k < kHorizonSteps; ++k) {
    const OrientedBox base = ego_footprint(traj, scene.ego, k);
    const Vec2 v = profile.velocity[k];
    const double t0 = static_cast<double>(k + 1) * Trajectory::dt;
    // Each sub-step covers the motion over its whole interval, so refining the step cannot
    // reveal contacts that a coarser step skipped.
    for (std::size_t j = 0; j < substeps; ++j) {
      const double tau = static_cast<double>(j) * config.ttc_substep;
      OrientedBox ego_box = base;
      ego_box.center = base.center + v * tau;
      for (const auto & agent : scene.agents) {
        const OrientedBox agent_box = agent_box_at(agent, t0 + tau);
        if (boxes_overlap_during(ego_box, v, agent_box, agent.velocity(), config.ttc_substep)) {
          return 0.0;
        }
      }
    }
  }
  return 1.0;
}

double eval_lk(const Scene & scene, const Trajectory & traj, const OracleConfig & config)
{
  if (scene.lanes.empty()) {
    return 1.0;
  }
  std::size_t run = 0;
  for (const auto & w : traj.waypoints) {
    const NearestLane near = nearest_lane(scene, w.position());
    const bool off = near.lane == nullptr || near.projection.distance > config.lk_max_offset;
    run = off ? run + 1 : 0;
    if (run >= config.lk_min_steps) {
      return 0.0;
    }
  }
  return 1.0;
}

double eval_hc(const Scene & scene, const Trajectory & traj, const OracleConfig & config)
{
  const auto p = kinematics(traj, scene.ego);
  const auto lon_ok = [&](double a) {
    return a >= config.hc_min_lon_accel && a <= config.hc_max_lon_accel;
  };
  const auto lat_ok = [&](double a) { return std::abs(a) <= config.hc_max_lat_accel; };
  if (!lon_ok(p.history_accel_lon) || !lat_ok(p.history_accel_lat)) {
    return 0.0;
  }
  for (std::size_t k = 0; k < p.accel_lon.size(); ++k) {
    if (!lon_ok(p.accel_lon[k]) || !lat_ok(p.accel_lat[k])) {
      return 0.0;
    }
  }
  for (double j : p.jerk_magnitude) {
    if (j > config.hc_max_jerk) {
      return 0.0;
    }
  }
  return 1.0;
}

MetricVector eval_all(const Scene & scene, const Trajectory & traj, const OracleConfig & config)
{
  MetricVector m;
  m.nc = eval_nc(scene, traj, config);
  m.dac = eval_dac(scene, traj, config);
  m.ddc = eval_ddc(scene, traj, config);
  m.tlc = eval_tlc(scene, traj, config);
  m.ep = eval_ep(scene, traj, config);
  m.ttc = eval_ttc(scene, traj, config);
  m.lk = eval_lk(scene, traj, config);
  m.hc = eval_hc(scene, traj, config);
  return m;
}

double final_score(const MetricVector & m, const FinalScoreWeights & w)
{
  return w.nc * m.nc + w.dac * m.dac + w.ep * m.ep + w.ttc * m.ttc + w.lk * m.lk + w.ddc * m.ddc;
}

double max_final_score(const FinalScoreWeights & w)
{
  return final_score(MetricVector{1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0}, w);
}

AggregateReport aggregate_report(std::span<const MetricVector> metrics, const AggregationConfig & config)
{
  if (metrics.empty()) {
    throw std::invalid_argument("aggregate_report: empty corpus");
  }
  const double weight_sum =
    config.ep_weight + config.ttc_weight + config.lk_weight + config.hc_weight;
  if (!(weight_sum > 0.0) || config.ep_weight < 0.0 || config.ttc_weight < 0.0 ||
      config.lk_weight < 0.0 || config.hc_weight < 0.0) {
    throw std::invalid_argument("aggregate_report: weights must be non-negative with a positive sum");
  }
  AggregateReport report;
  report.count = metrics.size();
  std::array<double, kMetricCount> mean{};
  for (const auto & m : metrics) {
    for (std::size_t i = 0; i < kMetricCount; ++i) {
      mean[i] += m.get(kAllMetrics[i]);
    }
  }
  const double n = static_cast<double>(metrics.size());
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    mean[i] /= n;
    report.mean_percent[i] = 100.0 * mean[i];
  }
  const auto at = [&](MetricId id) { return mean[static_cast<std::size_t>(id)]; };
  const double penalty = at(MetricId::nc) * at(MetricId::dac) * at(MetricId::ddc) * at(MetricId::tlc);
  const double weighted = (config.ep_weight * at(MetricId::ep) + config.ttc_weight * at(MetricId::ttc) +
                           config.lk_weight * at(MetricId::lk) + config.hc_weight * at(MetricId::hc)) /
                          weight_sum;
  report.combined_percent = 100.0 * penalty * weighted;
  return report;
}

}  // namespace vocabplan
