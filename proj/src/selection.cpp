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

#include "vocabplan/selection.hpp"

#include "vocabplan/core/grid.hpp"
#include "vocabplan/planner.hpp"

#include <algorithm>
#include <stdexcept>

namespace vocabplan
{

using nn::Tensor;

namespace
{

struct CandidateView
{
  std::vector<std::size_t> indices;
  std::vector<Trajectory> bases;
  std::vector<PredictedMetrics> predictions;
  std::vector<Trajectory> decoded;
};

Tensor embeddings_for(const Tensor & input, std::span<const Trajectory> trajs, const Scene & scene, const ScorerModel & model)
{
  const Tensor samples = sample_inputs(input, trajs, scene.grid);
  return refine_with_agents(embed_from_samples(samples, scene.ego, model.planner), scene.agents, model.planner);
}

}  // namespace

const char * to_string(SelectionSource source)
{
  return source == SelectionSource::e2e ? "e2e" : "external";
}

FilterResult filter_drivable(std::span<const Trajectory> candidates, const Scene & scene)
{
  FilterResult result;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const bool inside = std::all_of(
      candidates[i].waypoints.begin(), candidates[i].waypoints.end(),
      [&](const Waypoint & w) { return is_drivable(scene.drivable, scene.grid, w.position()); });
    if (inside) {
      result.survivors.push_back(i);
    }
  }
  if (result.survivors.empty() && !candidates.empty()) {
    result.bypassed = true;
    for (std::size_t i = 0; i < candidates.size(); ++i) result.survivors.push_back(i);
  }
  return result;
}

std::vector<RankedCandidate> rank_candidates(
  std::span<const PredictedMetrics> preds, std::span<const std::size_t> indices, const FinalScoreWeights & weights)
{
  if (preds.empty()) {
    throw std::invalid_argument("rank_candidates: no candidates");
  }
  if (preds.size() != indices.size()) {
    throw std::invalid_argument("rank_candidates: predictions and indices differ in length");
  }
  std::vector<RankedCandidate> ranking(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    ranking[i] = {indices[i], final_score(expected_score(preds[i]), weights)};
  }
  std::sort(ranking.begin(), ranking.end(), [](const RankedCandidate & a, const RankedCandidate & b) {
    if (a.score != b.score) {
      return a.score > b.score;
    }
    return a.index < b.index;
  });
  return ranking;
}

std::vector<RankedCandidate> rank_candidates(std::span<const PredictedMetrics> preds, const FinalScoreWeights & weights)
{
  std::vector<std::size_t> indices(preds.size());
  for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
  return rank_candidates(preds, indices, weights);
}

ExternalScore score_external(
  const Trajectory & traj, const Scene & scene, const ScorerModel & model, const FinalScoreWeights & weights)
{
  const Tensor input = bev_input(render_bev(scene, scene.grid), scene.grid);
  const Trajectory single[1] = {traj};
  ExternalScore out;
  out.metrics = squash(run_heads(embeddings_for(input, single, scene, model), model.scorer)).front();
  out.s_final = final_score(expected_score(out.metrics), weights);
  return out;
}

std::vector<Trajectory> decode_candidates(const Scene & scene, const ScorerModel & model, const Vocabulary & vocab)
{
  if (vocab.entries.empty()) {
    return {};
  }
  const Tensor input = bev_input(render_bev(scene, scene.grid), scene.grid);
  const Tensor emb = embeddings_for(input, vocab.entries, scene, model);
  return apply_offsets(vocab.entries, decode_offsets(emb, model.planner));
}

SelectionResult select(
  const Scene & scene, const ScorerModel & model, const Vocabulary & vocab, const Trajectory * external,
  const SelectOptions & options)
{
  if (vocab.entries.empty()) {
    throw std::invalid_argument("select: empty vocabulary");
  }
  const FilterResult filter = filter_drivable(vocab.entries, scene);

  CandidateView view;
  view.indices = filter.survivors;
  for (std::size_t i : view.indices) view.bases.push_back(vocab.entries[i]);

  const Tensor input = bev_input(render_bev(scene, scene.grid), scene.grid);
  const Tensor emb = embeddings_for(input, view.bases, scene, model);
  view.decoded = apply_offsets(view.bases, decode_offsets(emb, model.planner));
  if (options.oracle_injection) {
    for (const auto & t : view.decoded) view.predictions.push_back(as_prediction(eval_all(scene, t)));
  } else {
    view.predictions = squash(run_heads(emb, model.scorer));
  }

  const auto ranking = rank_candidates(view.predictions, view.indices, options.weights);
  const std::size_t top = ranking.front().index;
  const auto pos = static_cast<std::size_t>(
    std::find(view.indices.begin(), view.indices.end(), top) - view.indices.begin());

  SelectionResult result;
  result.chosen_index = top;
  result.e2e = view.decoded[pos];
  result.s_final_e2e = ranking.front().score;
  result.filtered_count = vocab.entries.size() - filter.survivors.size();
  result.filter_bypassed = filter.bypassed;
  result.ranking.assign(ranking.begin(), ranking.begin() + std::min(options.ranking_size, ranking.size()));
  result.chosen = result.e2e;
  result.source = SelectionSource::e2e;

  if (external != nullptr) {
    double s_ext = 0.0;
    if (options.oracle_injection) {
      s_ext = final_score(eval_all(scene, *external), options.weights);
    } else {
      s_ext = score_external(*external, scene, model, options.weights).s_final;
    }
    result.s_final_external = s_ext;
    if (s_ext > result.s_final_e2e) {
      result.chosen = *external;
      result.source = SelectionSource::external;
    }
  }
  return result;
}

}  // namespace vocabplan
