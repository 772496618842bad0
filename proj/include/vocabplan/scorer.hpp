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

#ifndef VOCABPLAN__SCORER_HPP_
#define VOCABPLAN__SCORER_HPP_

#include "vocabplan/core/types.hpp"
#include "vocabplan/nn/layers.hpp"
#include "vocabplan/nn/tensor.hpp"
#include "vocabplan/oracle.hpp"
#include "vocabplan/planner.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vocabplan
{

inline constexpr std::size_t kScorerHidden = 64;
inline constexpr double kReferenceImitationWeight = 20.0;
inline constexpr double kReferenceScorerWeight = 14.0;
inline constexpr std::size_t kReferenceEpochs = 30;
inline constexpr std::size_t kReferenceBatchSize = 8;
inline constexpr double kReferenceLearningRate = 1e-4;

/// Output width of the head for a metric: 3 for ternary metrics, 1 otherwise.
std::size_t head_width(MetricId id);

struct ScorerParams
{
  std::array<nn::Mlp, kMetricCount> heads;  // indexed like kAllMetrics

  static ScorerParams init(std::size_t d, Rng & rng);
  std::size_t width() const { return heads.front().in_features(); }
  void collect(nn::ParameterList & out, const std::string & prefix = "scorer/") const;
};

ScorerParams clone(const ScorerParams & p);

/// Per-metric loss weights w_m, indexed like kAllMetrics.
struct MetricLossWeights
{
  std::array<double, kMetricCount> w{1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
};

struct PredictedMetrics
{
  std::array<double, 3> nc{};
  double dac{0.5};
  std::array<double, 3> ddc{};
  double tlc{0.5};
  double ep{0.5};
  double ttc{0.5};
  double lk{0.5};
  double hc{0.5};
};

/// Raw head outputs for a batch of embeddings: logits [n x width] per metric.
struct HeadOutputs
{
  std::array<nn::Tensor, kMetricCount> logits;
  std::size_t rows() const { return logits.front().dim(0); }
};

/// Embeddings are layer-normalized per row before entering the heads.
HeadOutputs run_heads(const nn::Tensor & embeddings, const ScorerParams & params);

/// Squashes head outputs: sigmoid for EP and binary metrics, softmax for ternary ones.
std::vector<PredictedMetrics> squash(const HeadOutputs & outputs);

/// Single-embedding prediction; throws std::invalid_argument on a width mismatch.
PredictedMetrics predict(std::span<const double> embedding, const ScorerParams & params);

/// Binary and EP values pass through; ternary distributions map to 0*p0 + 0.5*p1 + 1*p2.
MetricVector expected_score(const PredictedMetrics & pred);

/// Exact oracle values expressed as (one-hot) predictions.
PredictedMetrics as_prediction(const MetricVector & labels);

/// Maps ternary labels {0, 0.5, 1} to classes {0, 1, 2}; throws for other values.
std::size_t ternary_class(double label);

/// Differentiable composite loss averaged over candidates:
/// sum_m w_m * l_m with squared error (EP), binary cross-entropy (DAC, TLC, TTC, LK, HC)
/// and 3-class cross-entropy (NC, DDC). Labels are validated.
nn::Tensor composite_loss(const HeadOutputs & outputs, std::span<const MetricVector> labels, const MetricLossWeights & w);

/// Same objective evaluated on squashed predictions (probabilities clipped to [1e-15, 1]).
double composite_loss(std::span<const PredictedMetrics> preds, std::span<const MetricVector> labels, const MetricLossWeights & w);

struct ModelConfig
{
  std::size_t width{kDefaultPlannerWidth};
  std::uint64_t seed{42};
};

/// All learnable parameters: the planner head and the metric heads.
struct ScorerModel
{
  ModelConfig config;
  PlannerParams planner;
  ScorerParams scorer;

  static ScorerModel init(const ModelConfig & config);
  nn::ParameterList parameters() const;
};

ScorerModel clone(const ScorerModel & m);

void save_model(std::ostream & out, const ScorerModel & model);
ScorerModel load_model(std::istream & in);

/// One scene's training/evaluation inputs with everything that does not depend on parameters
/// precomputed.
struct PreparedScene
{
  std::string id;
  EgoState ego;
  std::vector<AgentBox> agents;
  Trajectory expert;
  std::vector<Trajectory> candidates;
  std::vector<std::string> candidate_ids;
  std::vector<MetricVector> labels;
  std::size_t vocab_count{0};
  std::size_t expert_nearest{0};  // index into candidates (a vocabulary entry)
  nn::Tensor samples;             // [candidates*8 x input channels]
};

/// Renders the scene and samples the candidate inputs. `labels` must match `candidates`.
PreparedScene prepare_scene(
  const Scene & scene, std::vector<Trajectory> candidates, std::vector<std::string> candidate_ids,
  std::vector<MetricVector> labels, std::size_t vocab_count, std::size_t expert_nearest,
  const BevGridSpec & spec = {});

/// Embeddings F_v^ctx [candidates x d] of a prepared scene.
nn::Tensor scene_embeddings(const PreparedScene & scene, const PlannerParams & planner);

struct TrainConfig
{
  std::size_t epochs{kReferenceEpochs};
  std::size_t batch_size{kReferenceBatchSize};
  double learning_rate{kReferenceLearningRate};
  double weight_decay{0.01};
  double imitation_weight{kReferenceImitationWeight};
  double scorer_weight{kReferenceScorerWeight};
  MetricLossWeights metric_weights{};
  FinalScoreWeights final_weights{};
  std::uint64_t seed{42};
};

void validate_train_config(const TrainConfig & config);

struct LossBreakdown
{
  double total{0.0};
  double imitation{0.0};
  double composite{0.0};
};

/// Weighted joint loss of one scene; gradients flow into every planner and scorer leaf.
nn::Tensor scene_loss(
  const PreparedScene & scene, const ScorerModel & model, const TrainConfig & config, LossBreakdown * parts = nullptr);

struct EvaluationReport
{
  std::size_t scenes{0};
  std::size_t candidates{0};
  // Accuracy at the 0.5 threshold (binary) or argmax (ternary); NaN for EP.
  std::array<double, kMetricCount> accuracy{};
  // Ten-bin expected calibration error for binary metrics; NaN otherwise.
  std::array<double, kMetricCount> calibration_error{};
  double ep_mae{0.0};
  double regret{0.0};
  double random_regret{0.0};
  std::vector<double> scene_regret;
};

struct EvaluationOptions
{
  FinalScoreWeights weights{};
  // Substitute oracle labels for the learned predictions.
  bool oracle_injection{false};
};

/// Throws std::invalid_argument for an empty corpus.
EvaluationReport evaluate_scorer(
  const ScorerModel & model, std::span<const PreparedScene> corpus, const EvaluationOptions & options = {});

struct EpochRecord
{
  std::size_t epoch{0};
  double learning_rate{0.0};
  std::size_t steps{0};
  LossBreakdown train{};
  bool has_heldout{false};
  EvaluationReport heldout{};
};

class TrainingError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Joint AdamW training with a cosine schedule over all optimizer steps. Scenes are shuffled per
/// epoch from the seed; `on_epoch` receives each record as it completes. Throws TrainingError on
/// a non-finite loss.
std::vector<EpochRecord> train(
  ScorerModel & model, std::span<const PreparedScene> train_set, std::span<const PreparedScene> heldout,
  const TrainConfig & config, const std::function<void(const EpochRecord &)> & on_epoch = {});

/// Line-delimited JSON record for the training log.
std::string epoch_record_json(const EpochRecord & record);

}  // namespace vocabplan

#endif  // VOCABPLAN__SCORER_HPP_
