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

#ifndef VOCABPLAN__VOCABULARY_HPP_
#define VOCABPLAN__VOCABULARY_HPP_

#include "vocabplan/core/types.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace vocabplan
{

inline constexpr std::size_t kTrajectoryVectorDim = 2 * kHorizonSteps;
inline constexpr std::size_t kDefaultVocabularySize = 256;
inline constexpr std::size_t kReferenceVocabularySize = 8192;

using TrajectoryVector = std::array<double, kTrajectoryVectorDim>;

/// (x_1, y_1, ..., x_8, y_8); headings are dropped.
TrajectoryVector traj_to_vector(const Trajectory & traj);

/// Positions from the vector; heading k points from waypoint k to k+1, the
/// last heading repeats its predecessor, and near-zero steps keep the previous heading.
Trajectory vector_to_traj(const TrajectoryVector & v);

double squared_distance(const TrajectoryVector & a, const TrajectoryVector & b);

struct KMeansOptions
{
  std::size_t clusters{kDefaultVocabularySize};
  std::uint64_t seed{0};
  std::size_t restarts{8};
  std::size_t max_iters{100};
};

struct KMeansRun
{
  std::vector<TrajectoryVector> centroids;
  std::vector<std::size_t> assignment;
  double inertia{0.0};
  std::vector<double> inertia_history;  // after every Lloyd update
  std::size_t iterations{0};
  bool converged{false};
};

/// Lloyd's algorithm with k-means++ seeding; returns the lowest-inertia of
/// `restarts` runs (earliest on ties).
KMeansRun kmeans(std::span<const TrajectoryVector> points, const KMeansOptions & options);

/// Single seeded run; exposed for inspection of per-run histories.
KMeansRun kmeans_single_run(std::span<const TrajectoryVector> points, std::size_t clusters,
                            std::uint64_t seed, std::size_t max_iters);

struct VocabularyMeta
{
  std::size_t iterations{0};
  double inertia{0.0};
  std::uint64_t seed{0};
  std::size_t restarts{0};
  std::size_t max_iters{0};
  std::size_t corpus_size{0};
};

struct Vocabulary
{
  std::vector<Trajectory> entries;
  VocabularyMeta meta;

  std::size_t size() const { return entries.size(); }
};

/// Throws std::invalid_argument when m == 0 or fewer experts than m.
Vocabulary build_vocabulary(std::span<const Trajectory> experts, std::size_t m, std::uint64_t seed,
                            std::size_t restarts = 8, std::size_t max_iters = 100);

struct NearestEntry
{
  std::size_t index{0};
  double distance{0.0};
};

/// Euclidean nearest entry in vector space; ties go to the lowest index.
NearestEntry nearest(const Vocabulary & vocab, const Trajectory & traj);

}  // namespace vocabplan

#endif  // VOCABPLAN__VOCABULARY_HPP_
