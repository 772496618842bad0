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

#include "kmeans_cases.hpp"
#include "test_support.hpp"

#include "vocabplan/core/geometry.hpp"
#include "vocabplan/vocabulary.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace vocabplan
{
namespace
{

using test::exhaustive_partition_optimum;
using test::line_to;
using test::random_corpus;
using test::vectors_of;

TEST(TrajToVector, Examples)
{
  for (double x : traj_to_vector(Trajectory{})) EXPECT_EQ(x, 0.0);
  Trajectory t;
  for (std::size_t k = 0; k < kHorizonSteps; ++k) t.waypoints[k] = {static_cast<double>(k + 1), 0.0, 0.3};
  const auto v = traj_to_vector(t);
  for (std::size_t k = 0; k < kHorizonSteps; ++k) {
    EXPECT_EQ(v[2 * k], static_cast<double>(k + 1));
    EXPECT_EQ(v[2 * k + 1], 0.0);
  }
}

TEST(TrajToVector, RoundTripRecomputesHeadings)
{
  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    const Trajectory t = test::random_trajectory(rng);
    const Trajectory r = vector_to_traj(traj_to_vector(t));
    for (std::size_t k = 0; k < kHorizonSteps; ++k) {
      ASSERT_EQ(r.waypoints[k].x, t.waypoints[k].x);
      ASSERT_EQ(r.waypoints[k].y, t.waypoints[k].y);
    }
    for (std::size_t k = 0; k + 1 < kHorizonSteps; ++k) {
      const double expected = std::atan2(
        t.waypoints[k + 1].y - t.waypoints[k].y, t.waypoints[k + 1].x - t.waypoints[k].x);
      ASSERT_NEAR(r.waypoints[k].theta, wrap_angle(expected), 1e-12);
    }
    ASSERT_EQ(r.waypoints[7].theta, r.waypoints[6].theta);
  }
}

TEST(TrajToVector, StationarySegmentsKeepPreviousHeading)
{
  Trajectory t = line_to(8.0);
  t.waypoints[7] = t.waypoints[6];
  const Trajectory r = vector_to_traj(traj_to_vector(t));
  EXPECT_EQ(r.waypoints[6].theta, r.waypoints[5].theta);
}

TEST(BuildVocabulary, SingleClusterIsMean)
{
  Rng rng(22);
  std::vector<Trajectory> experts;
  for (int i = 0; i < 30; ++i) experts.push_back(test::random_trajectory(rng));
  const Vocabulary v = build_vocabulary(experts, 1, 5);
  ASSERT_EQ(v.size(), 1u);
  TrajectoryVector mean{};
  for (const auto & e : experts) {
    const auto p = traj_to_vector(e);
    for (std::size_t j = 0; j < kTrajectoryVectorDim; ++j) mean[j] += p[j] / 30.0;
  }
  const auto c = traj_to_vector(v.entries[0]);
  for (std::size_t j = 0; j < kTrajectoryVectorDim; ++j) EXPECT_NEAR(c[j], mean[j], 1e-12);
}

TEST(BuildVocabulary, DistinctInputsReproduceThemselves)
{
  Rng rng(23);
  std::vector<Trajectory> experts;
  for (int i = 0; i < 12; ++i) experts.push_back(test::random_trajectory(rng));
  const Vocabulary v = build_vocabulary(experts, 12, 9);
  EXPECT_EQ(v.meta.inertia, 0.0);
  for (const auto & e : experts) {
    const auto n = nearest(v, e);
    EXPECT_EQ(n.distance, 0.0);
  }
}

TEST(BuildVocabulary, MicroInstanceMatchesExhaustiveOptimum)
{
  const std::vector<Trajectory> experts = test::micro_instance();
  const double optimum = exhaustive_partition_optimum(vectors_of(experts), 3);
  const Vocabulary v = build_vocabulary(experts, 3, 42, 8);
  EXPECT_NEAR(v.meta.inertia, optimum, 1e-9);

  std::vector<double> terminals;
  for (const auto & e : v.entries) terminals.push_back(e.waypoints[7].x);
  std::sort(terminals.begin(), terminals.end());
  EXPECT_NEAR(terminals[0], 10.1, 1e-9);
  EXPECT_NEAR(terminals[1], 20.1, 1e-9);
  EXPECT_NEAR(terminals[2], 30.1, 1e-9);
}

TEST(BuildVocabulary, Errors)
{
  std::vector<Trajectory> experts(3);
  EXPECT_THROW(build_vocabulary(experts, 0, 1), std::invalid_argument);
  EXPECT_THROW(build_vocabulary(experts, 4, 1), std::invalid_argument);
  EXPECT_THROW(nearest(Vocabulary{}, Trajectory{}), std::invalid_argument);
}

TEST(BuildVocabulary, FullScaleSizeIsSupported)
{
  EXPECT_EQ(kReferenceVocabularySize, 8192u);
  EXPECT_EQ(kDefaultVocabularySize, 256u);
  Rng rng(24);
  std::vector<Trajectory> experts;
  for (std::size_t i = 0; i < kReferenceVocabularySize; ++i) experts.push_back(test::random_trajectory(rng));
  const Vocabulary v = build_vocabulary(experts, kReferenceVocabularySize, 1, 1, 1);
  EXPECT_EQ(v.size(), kReferenceVocabularySize);
  EXPECT_EQ(v.meta.inertia, 0.0);
}

TEST(KMeans, InertiaNeverIncreases)
{
  for (int corpus = 0; corpus < 100; ++corpus) {
    Rng rng(500 + corpus);
    const auto pts = random_corpus(rng, 40 + rng.index(60));
    const std::size_t k = 2 + rng.index(10);
    const KMeansRun run = kmeans_single_run(pts, k, corpus, 100);
    for (std::size_t i = 1; i < run.inertia_history.size(); ++i) {
      ASSERT_LE(run.inertia_history[i], run.inertia_history[i - 1]) << "corpus " << corpus << " iteration " << i;
    }
    ASSERT_GE(run.inertia, 0.0);
  }
}

TEST(KMeans, CentroidsAreMeansAtConvergence)
{
  for (int corpus = 0; corpus < 20; ++corpus) {
    Rng rng(700 + corpus);
    const auto pts = random_corpus(rng, 80);
    const KMeansRun run = kmeans_single_run(pts, 6, corpus, 500);
    ASSERT_TRUE(run.converged);
    for (std::size_t c = 0; c < run.centroids.size(); ++c) {
      TrajectoryVector sum{};
      std::size_t count = 0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (run.assignment[i] != c) continue;
        ++count;
        for (std::size_t j = 0; j < kTrajectoryVectorDim; ++j) sum[j] += pts[i][j];
      }
      ASSERT_GT(count, 0u);
      for (std::size_t j = 0; j < kTrajectoryVectorDim; ++j) {
        ASSERT_NEAR(run.centroids[c][j], sum[j] / static_cast<double>(count), 1e-9);
      }
    }
  }
}

TEST(KMeans, BitReproducible)
{
  Rng rng(25);
  std::vector<Trajectory> experts;
  for (int i = 0; i < 100; ++i) experts.push_back(test::random_trajectory(rng));
  const Vocabulary a = build_vocabulary(experts, 16, 77);
  const Vocabulary b = build_vocabulary(experts, 16, 77);
  EXPECT_EQ(a.entries, b.entries);
  EXPECT_EQ(a.meta.inertia, b.meta.inertia);
  EXPECT_EQ(a.meta.iterations, b.meta.iterations);
}

TEST(KMeans, RecoversPlantedClusters)
{
  Rng rng(26);
  const double spread = 0.5;
  std::vector<TrajectoryVector> means(5);
  for (std::size_t c = 0; c < means.size(); ++c) {
    for (auto & x : means[c]) x = rng.uniform(-5.0, 5.0);
    means[c][0] += 40.0 * static_cast<double>(c);
  }
  std::vector<TrajectoryVector> pts;
  for (const auto & m : means) {
    for (int i = 0; i < 30; ++i) {
      TrajectoryVector p = m;
      for (auto & x : p) x += rng.uniform(-spread, spread);
      pts.push_back(p);
    }
  }
  const KMeansRun run = kmeans(pts, {5, 3, 8, 100});
  for (const auto & m : means) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto & c : run.centroids) best = std::min(best, std::sqrt(squared_distance(m, c)));
    EXPECT_LT(best, spread);
  }
}

TEST(Nearest, Examples)
{
  Rng rng(27);
  Vocabulary v;
  for (int i = 0; i < 64; ++i) v.entries.push_back(test::random_trajectory(rng));
  const auto hit = nearest(v, v.entries[5]);
  EXPECT_EQ(hit.index, 5u);
  EXPECT_EQ(hit.distance, 0.0);

  Vocabulary one;
  one.entries.push_back(Trajectory{});
  EXPECT_EQ(nearest(one, test::random_trajectory(rng)).index, 0u);

  for (int q = 0; q < 200; ++q) {
    const Trajectory query = test::random_trajectory(rng);
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.entries.size(); ++i) {
      double d = 0.0;
      for (std::size_t k = 0; k < kHorizonSteps; ++k) {
        const double dx = v.entries[i].waypoints[k].x - query.waypoints[k].x;
        const double dy = v.entries[i].waypoints[k].y - query.waypoints[k].y;
        d += dx * dx + dy * dy;
      }
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    const auto n = nearest(v, query);
    ASSERT_EQ(n.index, best);
    ASSERT_NEAR(n.distance, std::sqrt(best_d), 1e-12);
  }
}

TEST(Nearest, TiesGoToLowestIndex)
{
  Vocabulary v;
  v.entries = {line_to(10.0), line_to(12.0), line_to(10.0)};
  EXPECT_EQ(nearest(v, line_to(10.0)).index, 0u);
  EXPECT_EQ(nearest(v, line_to(11.0)).index, 0u);
}

}  // namespace
}  // namespace vocabplan
