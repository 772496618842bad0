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

#ifndef VOCABPLAN__SELECTION_HPP_
#define VOCABPLAN__SELECTION_HPP_

#include "vocabplan/core/types.hpp"
#include "vocabplan/oracle.hpp"
#include "vocabplan/scorer.hpp"
#include "vocabplan/vocabulary.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace vocabplan
{

inline constexpr std::size_t kDefaultRankingSize = 16;

enum class SelectionSource { e2e, external };

const char * to_string(SelectionSource source);

struct FilterResult
{
  std::vector<std::size_t> survivors;
  // Every candidate failed the check, so all of them were kept.
  bool bypassed{false};
};

/// Keeps candidates whose waypoint centers all fall in drivable cells. Never returns an empty
/// set for a non-empty input.
FilterResult filter_drivable(std::span<const Trajectory> candidates, const Scene & scene);

struct RankedCandidate
{
  std::size_t index{0};
  double score{0.0};
};

/// Final scores of `preds[i]` (belonging to candidate `indices[i]`), sorted descending with ties
/// broken by the lower candidate index. Throws std::invalid_argument for an empty or mismatched input.
std::vector<RankedCandidate> rank_candidates(
  std::span<const PredictedMetrics> preds, std::span<const std::size_t> indices, const FinalScoreWeights & weights);

/// Same, with candidate indices 0..n-1.
std::vector<RankedCandidate> rank_candidates(std::span<const PredictedMetrics> preds, const FinalScoreWeights & weights);

struct ExternalScore
{
  PredictedMetrics metrics;
  double s_final{0.0};
};

/// Scores a trajectory through the candidate pipeline without the residual offset head.
ExternalScore score_external(
  const Trajectory & traj, const Scene & scene, const ScorerModel & model, const FinalScoreWeights & weights = {});

struct SelectOptions
{
  FinalScoreWeights weights{};
  // Use oracle metrics of the decoded candidates (and the external trajectory) instead of the
  // learned predictions.
  bool oracle_injection{false};
  std::size_t ranking_size{kDefaultRankingSize};
};

struct SelectionResult
{
  Trajectory chosen;
  SelectionSource source{SelectionSource::e2e};
  std::size_t chosen_index{0};  // vocabulary index of the top-ranked e2e candidate
  Trajectory e2e;                // decoded top-1 candidate
  double s_final_e2e{0.0};
  std::optional<double> s_final_external;
  std::size_t filtered_count{0};  // candidates removed by the drivable filter
  bool filter_bypassed{false};
  std::vector<RankedCandidate> ranking;
};

/// Decoded candidates v_pred for every vocabulary entry of a scene.
std::vector<Trajectory> decode_candidates(const Scene & scene, const ScorerModel & model, const Vocabulary & vocab);

/// filter -> embed/refine/predict -> rank -> decode the top-1, then compare with the external
/// trajectory when one is given (ties keep the e2e candidate).
SelectionResult select(
  const Scene & scene, const ScorerModel & model, const Vocabulary & vocab, const Trajectory * external,
  const SelectOptions & options = {});

}  // namespace vocabplan

#endif  // VOCABPLAN__SELECTION_HPP_
