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

#ifndef VOCABPLAN__TESTS__KMEANS_CASES_HPP_
#define VOCABPLAN__TESTS__KMEANS_CASES_HPP_

#include "test_support.hpp"

#include "vocabplan/vocabulary.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace vocabplan::test
{

// Straight line along +x whose last waypoint sits at terminal_x.
inline Trajectory line_to(double terminal_x)
{
  Trajectory t;
  for (std::size_t k = 0; k < kHorizonSteps; ++k) {
    t.waypoints[k] = {terminal_x * static_cast<double>(k + 1) / kHorizonSteps, 0.0, 0.0};
  }
  return t;
}

inline std::vector<TrajectoryVector> vectors_of(const std::vector<Trajectory> & trajs)
{
  std::vector<TrajectoryVector> out;
  for (const auto & t : trajs) out.push_back(traj_to_vector(t));
  return out;
}

// Lowest inertia over every assignment of the points to k non-empty clusters.
inline double exhaustive_partition_optimum(const std::vector<TrajectoryVector> & points, std::size_t k)
{
  const std::size_t n = points.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= k;
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> label(n);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      label[i] = c % k;
      c /= k;
      ++counts[label[i]];
    }
    bool ok = true;
    for (auto cnt : counts) ok = ok && cnt > 0;
    if (!ok) continue;
    std::vector<TrajectoryVector> means(k, TrajectoryVector{});
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < kTrajectoryVectorDim; ++j) means[label[i]][j] += points[i][j];
    }
    for (std::size_t g = 0; g < k; ++g) {
      for (auto & x : means[g]) x /= static_cast<double>(counts[g]);
    }
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) inertia += squared_distance(points[i], means[label[i]]);
    best = std::min(best, inertia);
  }
  return best;
}

inline std::vector<TrajectoryVector> random_corpus(Rng & rng, std::size_t n)
{
  std::vector<TrajectoryVector> pts(n);
  for (auto & p : pts) {
    for (auto & x : p) x = rng.uniform(-20.0, 20.0);
  }
  return pts;
}


// Six experts in three tight pairs; the optimum for three clusters pairs them up.
inline std::vector<Trajectory> micro_instance()
{
  std::vector<Trajectory> experts;
  for (double x : {10.0, 10.2, 20.0, 20.2, 30.0, 30.2}) experts.push_back(line_to(x));
  return experts;
}

}  // namespace vocabplan::test

#endif  // VOCABPLAN__TESTS__KMEANS_CASES_HPP_
