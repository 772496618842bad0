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

#ifndef VOCABPLAN__ORACLE_HPP_
#define VOCABPLAN__ORACLE_HPP_

#include "vocabplan/core/types.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <string>

namespace vocabplan
{

/**
 * @brief The eight rule-based driving metrics, in head order.
 */
enum class MetricId : std::size_t { nc, dac, ddc, tlc, ep, ttc, lk, hc };

inline constexpr std::size_t kMetricCount = 8;
inline constexpr std::array<MetricId, kMetricCount> kAllMetrics = {
  MetricId::nc, MetricId::dac, MetricId::ddc, MetricId::tlc,
  MetricId::ep, MetricId::ttc, MetricId::lk, MetricId::hc};

enum class MetricKind { continuous, binary, ternary };

MetricKind metric_kind(MetricId id);
/// Short key used in label files ("nc", "dac", ...).
const char * metric_key(MetricId id);
/// Long report name ("no_at_fault_collisions", ...).
const char * metric_report_name(MetricId id);

struct MetricVector
{
  double nc{1.0};
  double dac{1.0};
  double ddc{1.0};
  double tlc{1.0};
  double ep{0.0};
  double ttc{1.0};
  double lk{1.0};
  double hc{1.0};

  double get(MetricId id) const;
  void set(MetricId id, double value);
  bool operator==(const MetricVector &) const = default;
};

/// Throws std::invalid_argument when a field is outside its value set.
void validate_metric_vector(const MetricVector & m);

/// Weights w1..w6 of the ranking sum over (NC, DAC, EP, TTC, LK, DDC).
struct FinalScoreWeights
{
  double nc{4.0};
  double dac{0.8};
  double ep{0.01};
  double ttc{0.1};
  double lk{0.04};
  double ddc{6.0};
};

/// Thresholds for the metric evaluators; defaults are the documented choices.
struct OracleConfig
{
  double at_fault_min_speed{0.1};  // m/s
  double ttc_horizon{1.0};         // s
  double ttc_substep{0.1};         // s
  double lk_max_offset{0.5};       // m
  std::size_t lk_min_steps{2};
  double hc_min_lon_accel{-4.05};  // m/s^2
  double hc_max_lon_accel{2.40};   // m/s^2
  double hc_max_lat_accel{4.89};   // m/s^2
  double hc_max_jerk{8.37};        // m/s^3
  double ddc_full_credit{2.0};     // m against traffic
  double ddc_half_credit{6.0};     // m against traffic
};

double eval_nc(const Scene & scene, const Trajectory & traj, const OracleConfig & config = {});
/// 1 when every footprint corner (taken 1e-9 m inside the box) lies in a drivable cell at every step.
double eval_dac(const Scene & scene, const Trajectory & traj, const OracleConfig & config = {});
double eval_ddc(const Scene & scene, const Trajectory & traj, const OracleConfig & config = {});
double eval_tlc(const Scene & scene, const Trajectory & traj, const OracleConfig & config = {});
/// Throws std::invalid_argument for a degenerate route or non-positive reference progress.
double eval_ep(const Scene & scene, const Trajectory & traj, const OracleConfig & config = {});
/// From every waypoint, ego (at its segment velocity) and agents are propagated for ttc_horizon
/// seconds in sub-steps of ttc_substep; each sub-step checks the swept interval for overlap.
double eval_ttc(const Scene & scene, const Trajectory & traj, const OracleConfig & config = {});
double eval_lk(const Scene & scene, const Trajectory & traj, const OracleConfig & config = {});
double eval_hc(const Scene & scene, const Trajectory & traj, const OracleConfig & config = {});

MetricVector eval_all(const Scene & scene, const Trajectory & traj, const OracleConfig & config = {});

/// Against-traffic distance accumulated by the DDC evaluator (exposed for reports and tests).
double against_traffic_distance(const Scene & scene, const Trajectory & traj);

/// w1*NC + w2*DAC + w3*EP + w4*TTC + w5*LK + w6*DDC; TLC and HC do not enter.
double final_score(const MetricVector & m, const FinalScoreWeights & w);

/// Score of a field-wise perfect vector (all ones).
double max_final_score(const FinalScoreWeights & w);

struct AggregationConfig
{
  double ep_weight{1.0};
  double ttc_weight{1.0};
  double lk_weight{1.0};
  double hc_weight{1.0};
};

struct AggregateReport
{
  std::size_t count{0};
  std::array<double, kMetricCount> mean_percent{};
  // Stand-in combination: prod(mean NC, DAC, DDC, TLC) * weighted mean(EP, TTC, LK, HC), in percent.
  double combined_percent{0.0};
};

/// Throws std::invalid_argument for an empty corpus.
AggregateReport aggregate_report(std::span<const MetricVector> metrics, const AggregationConfig & config = {});

}  // namespace vocabplan

#endif  // VOCABPLAN__ORACLE_HPP_
