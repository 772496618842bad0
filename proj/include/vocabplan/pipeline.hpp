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

#ifndef VOCABPLAN__PIPELINE_HPP_
#define VOCABPLAN__PIPELINE_HPP_

#include "vocabplan/core/types.hpp"
#include "vocabplan/io.hpp"
#include "vocabplan/oracle.hpp"
#include "vocabplan/scene_gen.hpp"
#include "vocabplan/scorer.hpp"
#include "vocabplan/vocabulary.hpp"

#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace vocabplan
{

/// Scene i is held out when i % every == every - 1 (every 6th scene by default).
bool is_heldout(std::size_t index, std::size_t every);

/// Experts of the non-held-out scenes, in index order.
std::vector<Trajectory> training_experts(std::span<const Scene> scenes, std::size_t heldout_every);

/// Adversarial seed of a scene; depends only on the run seed and the scene id.
std::uint64_t adversarial_seed(std::uint64_t seed, const std::string & scene_id);

/// Vocabulary entries followed by the scene's adversarial candidates.
struct CandidateSet
{
  std::vector<Trajectory> trajectories;
  std::vector<std::string> ids;
  std::size_t vocab_count{0};
};

CandidateSet make_candidate_set(
  const Scene & scene, const Vocabulary & vocab, std::size_t adversarial_count, std::uint64_t seed,
  const AdversarialConfig & adversarial = {});

/// Joins vocabulary entries with explicitly given adversarial trajectories.
CandidateSet make_candidate_set(const Vocabulary & vocab, const std::vector<io::NamedTrajectory> & adversarial);

std::vector<io::LabelRecord> label_candidates(
  const Scene & scene, const CandidateSet & candidates, const OracleConfig & oracle = {},
  const FinalScoreWeights & weights = {});

/// Checks that `labels` cover `candidates` in order; throws std::invalid_argument naming the scene.
std::vector<MetricVector> match_labels(
  const std::string & scene_id, const CandidateSet & candidates, const std::vector<io::LabelRecord> & labels);

PreparedScene prepare_labeled_scene(
  const Scene & scene, const Vocabulary & vocab, CandidateSet candidates, std::vector<MetricVector> labels);

/// Runs f(0..n-1) on up to `jobs` threads. Every index runs exactly once; the exception of the
/// lowest failing index is rethrown after all workers finish.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)> & f);

}  // namespace vocabplan

#endif  // VOCABPLAN__PIPELINE_HPP_
