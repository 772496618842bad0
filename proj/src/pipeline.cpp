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

#include "vocabplan/pipeline.hpp"

#include "vocabplan/core/random.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace vocabplan
{

bool is_heldout(std::size_t index, std::size_t every)
{
  if (every < 2) {
    throw std::invalid_argument("is_heldout: split period must be at least 2");
  }
  return index % every == every - 1;
}

std::vector<Trajectory> training_experts(std::span<const Scene> scenes, std::size_t heldout_every)
{
  std::vector<Trajectory> out;
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    if (!is_heldout(i, heldout_every)) {
      out.push_back(scenes[i].expert);
    }
  }
  return out;
}

std::uint64_t adversarial_seed(std::uint64_t seed, const std::string & scene_id)
{
  return mix_seed(seed, io::fnv1a64(scene_id));
}

CandidateSet make_candidate_set(
  const Scene & scene, const Vocabulary & vocab, std::size_t adversarial_count, std::uint64_t seed,
  const AdversarialConfig & adversarial)
{
  std::vector<io::NamedTrajectory> adv;
  if (adversarial_count > 0) {
    const auto set = generate_adversarial_candidates(scene, adversarial_count, adversarial_seed(seed, scene.id), adversarial);
    for (std::size_t i = 0; i < set.trajectories.size(); ++i) adv.push_back({io::adversarial_id(i), set.trajectories[i]});
  }
  return make_candidate_set(vocab, adv);
}

CandidateSet make_candidate_set(const Vocabulary & vocab, const std::vector<io::NamedTrajectory> & adversarial)
{
  CandidateSet c;
  c.vocab_count = vocab.entries.size();
  c.trajectories = vocab.entries;
  for (std::size_t i = 0; i < vocab.entries.size(); ++i) c.ids.push_back(io::vocab_entry_id(i));
  for (const auto & a : adversarial) {
    c.trajectories.push_back(a.traj);
    c.ids.push_back(a.id);
  }
  return c;
}

std::vector<io::LabelRecord> label_candidates(
  const Scene & scene, const CandidateSet & candidates, const OracleConfig & oracle, const FinalScoreWeights & weights)
{
  std::vector<io::LabelRecord> out;
  out.reserve(candidates.trajectories.size());
  for (std::size_t i = 0; i < candidates.trajectories.size(); ++i) {
    const MetricVector m = eval_all(scene, candidates.trajectories[i], oracle);
    out.push_back({candidates.ids[i], m, final_score(m, weights)});
  }
  return out;
}

std::vector<MetricVector> match_labels(
  const std::string & scene_id, const CandidateSet & candidates, const std::vector<io::LabelRecord> & labels)
{
  if (labels.size() != candidates.ids.size()) {
    throw std::invalid_argument(
      "labels for " + scene_id + ": expected " + std::to_string(candidates.ids.size()) + " records, found " +
      std::to_string(labels.size()));
  }
  std::vector<MetricVector> out;
  out.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].candidate_id != candidates.ids[i]) {
      throw std::invalid_argument(
        "labels for " + scene_id + ": record " + std::to_string(i) + " is '" + labels[i].candidate_id +
        "', expected '" + candidates.ids[i] + "'");
    }
    out.push_back(labels[i].metrics);
  }
  return out;
}

PreparedScene prepare_labeled_scene(
  const Scene & scene, const Vocabulary & vocab, CandidateSet candidates, std::vector<MetricVector> labels)
{
  const std::size_t nearest_index = nearest(vocab, scene.expert).index;
  return prepare_scene(
    scene, std::move(candidates.trajectories), std::move(candidates.ids), std::move(labels), candidates.vocab_count,
    nearest_index, scene.grid);
}

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)> & f)
{
  const std::size_t workers = std::max<std::size_t>(1, std::min(jobs, n));
  std::atomic<std::size_t> next{0};
  std::mutex mutex;
  std::size_t failed_index = n;
  std::exception_ptr failure;
  const auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) {
        return;
      }
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mutex);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  if (workers == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto & t : pool) t.join();
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
}

}  // namespace vocabplan
