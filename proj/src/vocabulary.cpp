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

#include "vocabplan/vocabulary.hpp"

#include "vocabplan/core/geometry.hpp"
#include "vocabplan/core/random.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vocabplan
{

TrajectoryVector traj_to_vector(const Trajectory & traj)
{
  TrajectoryVector v{};
  for (std::size_t k = 0; k < kHorizonSteps; ++k) {
    v[2 * k] = traj.waypoints[k].x;
    v[2 * k + 1] = traj.waypoints[k].y;
  }
  return v;
}

Trajectory vector_to_traj(const TrajectoryVector & v)
{
  constexpr double kMinStep = 1e-6;
  Trajectory t;
  for (std::size_t k = 0; k < kHorizonSteps; ++k) {
    t.waypoints[k].x = v[2 * k];
    t.waypoints[k].y = v[2 * k + 1];
  }
  double previous = 0.0;
  for (std::size_t k = 0; k + 1 < kHorizonSteps; ++k) {
    const double dx = v[2 * (k + 1)] - v[2 * k];
    const double dy = v[2 * (k + 1) + 1] - v[2 * k + 1];
    const double heading = std::hypot(dx, dy) > kMinStep ? std::atan2(dy, dx) : previous;
    t.waypoints[k].theta = wrap_angle(heading);
    previous = t.waypoints[k].theta;
  }
  t.waypoints[kHorizonSteps - 1].theta = t.waypoints[kHorizonSteps - 2].theta;
  return t;
}

double squared_distance(const TrajectoryVector & a, const TrajectoryVector & b)
{
  double d = 0.0;
  for (std::size_t i = 0; i < kTrajectoryVectorDim; ++i) {
    const double e = a[i] - b[i];
    d += e * e;
  }
  return d;
}

namespace
{

std::size_t nearest_centroid(const TrajectoryVector & p, const std::vector<TrajectoryVector> & centroids,
                             double & best_d)
{
  std::size_t best = 0;
  best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = squared_distance(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

std::vector<TrajectoryVector> seed_plus_plus(std::span<const TrajectoryVector> points, std::size_t k, Rng & rng)
{
  const std::size_t n = points.size();
  std::vector<TrajectoryVector> centroids;
  centroids.reserve(k);
  std::vector<bool> chosen(n, false);
  std::size_t first = rng.index(n);
  centroids.push_back(points[first]);
  chosen[first] = true;
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(points[i], centroids[0]);
  while (centroids.size() < k) {
    double total = 0.0;
    for (double d : d2) total += d;
    std::size_t pick = n;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (d2[i] > 0.0 && acc > target) {
          pick = i;
          break;
        }
      }
      if (pick == n) {
        // Rounding left the target past the last positive weight.
        for (std::size_t i = n; i-- > 0;) {
          if (d2[i] > 0.0) {
            pick = i;
            break;
          }
        }
      }
    } else {
      // Every point coincides with a centroid; fall back to an unused index.
      for (std::size_t i = 0; i < n; ++i) {
        if (!chosen[i]) {
          pick = i;
          break;
        }
      }
    }
    chosen[pick] = true;
    centroids.push_back(points[pick]);
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(points[i], centroids.back()));
    }
  }
  return centroids;
}

}  // namespace

KMeansRun kmeans_single_run(std::span<const TrajectoryVector> points, std::size_t clusters,
                            std::uint64_t seed, std::size_t max_iters)
{
  const std::size_t n = points.size();
  if (clusters == 0) {
    throw std::invalid_argument("kmeans: cluster count must be positive");
  }
  if (n < clusters) {
    throw std::invalid_argument(
      "kmeans: " + std::to_string(n) + " points cannot form " + std::to_string(clusters) + " clusters");
  }
  Rng rng(seed);
  KMeansRun run;
  run.centroids = seed_plus_plus(points, clusters, rng);
  run.assignment.assign(n, clusters);
  std::vector<double> cost(n, 0.0);

  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    std::vector<std::size_t> counts(clusters, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = nearest_centroid(points[i], run.centroids, cost[i]);
      if (c != run.assignment[i]) {
        changed = true;
        run.assignment[i] = c;
      }
      ++counts[c];
    }
    if (!changed) {
      run.converged = true;
      break;
    }
    // Empty clusters take the point farthest from its centroid among clusters
    // that can spare one.
    for (std::size_t c = 0; c < clusters; ++c) {
      if (counts[c] != 0) continue;
      std::size_t far = n;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[run.assignment[i]] > 1 && cost[i] > far_d) {
          far_d = cost[i];
          far = i;
        }
      }
      if (far == n) continue;
      --counts[run.assignment[far]];
      run.assignment[far] = c;
      counts[c] = 1;
      cost[far] = 0.0;
      run.centroids[c] = points[far];
    }
    std::vector<TrajectoryVector> sums(clusters, TrajectoryVector{});
    for (std::size_t i = 0; i < n; ++i) {
      auto & s = sums[run.assignment[i]];
      for (std::size_t j = 0; j < kTrajectoryVectorDim; ++j) s[j] += points[i][j];
    }
    for (std::size_t c = 0; c < clusters; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t j = 0; j < kTrajectoryVectorDim; ++j) {
        run.centroids[c][j] = sums[c][j] / static_cast<double>(counts[c]);
      }
    }
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) inertia += squared_distance(points[i], run.centroids[run.assignment[i]]);
    run.inertia_history.push_back(inertia);
    run.iterations = iter + 1;
  }
  run.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) run.inertia += squared_distance(points[i], run.centroids[run.assignment[i]]);
  return run;
}

KMeansRun kmeans(std::span<const TrajectoryVector> points, const KMeansOptions & options)
{
  if (options.restarts == 0) {
    throw std::invalid_argument("kmeans: restarts must be positive");
  }
  KMeansRun best;
  bool have = false;
  for (std::size_t r = 0; r < options.restarts; ++r) {
    KMeansRun run = kmeans_single_run(points, options.clusters, mix_seed(options.seed, r), options.max_iters);
    if (!have || run.inertia < best.inertia) {
      best = std::move(run);
      have = true;
    }
  }
  return best;
}

Vocabulary build_vocabulary(std::span<const Trajectory> experts, std::size_t m, std::uint64_t seed,
                            std::size_t restarts, std::size_t max_iters)
{
  if (m == 0) {
    throw std::invalid_argument("build_vocabulary: vocabulary size must be positive");
  }
  if (experts.size() < m) {
    throw std::invalid_argument(
      "build_vocabulary: " + std::to_string(experts.size()) + " expert trajectories are fewer than M = " +
      std::to_string(m));
  }
  std::vector<TrajectoryVector> points;
  points.reserve(experts.size());
  for (const auto & e : experts) points.push_back(traj_to_vector(e));

  const KMeansRun run = kmeans(points, {m, seed, restarts, max_iters});
  Vocabulary vocab;
  vocab.entries.reserve(m);
  for (const auto & c : run.centroids) vocab.entries.push_back(vector_to_traj(c));
  vocab.meta = {run.iterations, run.inertia, seed, restarts, max_iters, experts.size()};
  return vocab;
}

NearestEntry nearest(const Vocabulary & vocab, const Trajectory & traj)
{
  if (vocab.entries.empty()) {
    throw std::invalid_argument("nearest: empty vocabulary");
  }
  const TrajectoryVector q = traj_to_vector(traj);
  NearestEntry best{0, std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < vocab.entries.size(); ++i) {
    const double d = squared_distance(q, traj_to_vector(vocab.entries[i]));
    if (d < best.distance) {
      best = {i, d};
    }
  }
  best.distance = std::sqrt(best.distance);
  return best;
}

}  // namespace vocabplan
