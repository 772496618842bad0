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

#include "vocabplan/scorer.hpp"

#include "vocabplan/core/random.hpp"
#include "vocabplan/nn/ops.hpp"
#include "vocabplan/nn/optim.hpp"
#include "vocabplan/nn/serialize.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace vocabplan
{

using nn::Tensor;

namespace
{

constexpr double kProbabilityFloor = 1e-15;

double sigmoid_value(double x)
{
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

std::array<double, 3> softmax3(const double * z)
{
  const double m = std::max({z[0], z[1], z[2]});
  std::array<double, 3> p{std::exp(z[0] - m), std::exp(z[1] - m), std::exp(z[2] - m)};
  const double s = p[0] + p[1] + p[2];
  for (auto & v : p) v /= s;
  return p;
}

std::size_t metric_index(MetricId id) { return static_cast<std::size_t>(id); }

double binary_label(const MetricVector & m, MetricId id)
{
  const double v = m.get(id);
  if (v != 0.0 && v != 1.0) {
    throw std::invalid_argument(std::string("label for ") + metric_key(id) + " must be 0 or 1");
  }
  return v;
}

std::size_t argmax3(const std::array<double, 3> & p)
{
  std::size_t best = 0;
  for (std::size_t i = 1; i < 3; ++i) {
    if (p[i] > p[best]) best = i;
  }
  return best;
}

std::size_t argmax_index(std::span<const double> values)
{
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

}  // namespace

std::size_t head_width(MetricId id) { return metric_kind(id) == MetricKind::ternary ? 3 : 1; }

ScorerParams ScorerParams::init(std::size_t d, Rng & rng)
{
  if (d == 0) {
    throw std::invalid_argument("scorer width must be positive");
  }
  ScorerParams p;
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    p.heads[i] = nn::Mlp::uniform_init({d, kScorerHidden, head_width(kAllMetrics[i])}, rng);
  }
  return p;
}

void ScorerParams::collect(nn::ParameterList & out, const std::string & prefix) const
{
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    heads[i].collect(prefix + metric_key(kAllMetrics[i]) + "/", out);
  }
}

ScorerParams clone(const ScorerParams & p)
{
  ScorerParams c;
  for (std::size_t i = 0; i < kMetricCount; ++i) c.heads[i] = nn::clone(p.heads[i]);
  return c;
}

HeadOutputs run_heads(const Tensor & embeddings, const ScorerParams & params)
{
  if (embeddings.rank() != 2 || embeddings.dim(1) != params.width()) {
    throw std::invalid_argument(
      "scorer: embeddings " + nn::shape_string(embeddings.shape()) + " do not match head width " +
      std::to_string(params.width()));
  }
  HeadOutputs out;
  const Tensor normalized = nn::layer_norm_rows(embeddings);
  for (std::size_t i = 0; i < kMetricCount; ++i) out.logits[i] = params.heads[i].forward(normalized);
  return out;
}

std::vector<PredictedMetrics> squash(const HeadOutputs & outputs)
{
  const std::size_t n = outputs.rows();
  std::vector<PredictedMetrics> preds(n);
  const auto logit = [&](MetricId id, std::size_t row) {
    return outputs.logits[metric_index(id)].values().data() + row * head_width(id);
  };
  for (std::size_t r = 0; r < n; ++r) {
    PredictedMetrics & p = preds[r];
    p.nc = softmax3(logit(MetricId::nc, r));
    p.ddc = softmax3(logit(MetricId::ddc, r));
    p.dac = sigmoid_value(*logit(MetricId::dac, r));
    p.tlc = sigmoid_value(*logit(MetricId::tlc, r));
    p.ep = sigmoid_value(*logit(MetricId::ep, r));
    p.ttc = sigmoid_value(*logit(MetricId::ttc, r));
    p.lk = sigmoid_value(*logit(MetricId::lk, r));
    p.hc = sigmoid_value(*logit(MetricId::hc, r));
  }
  return preds;
}

PredictedMetrics predict(std::span<const double> embedding, const ScorerParams & params)
{
  if (embedding.size() != params.width()) {
    throw std::invalid_argument(
      "predict: embedding width " + std::to_string(embedding.size()) + " does not match " +
      std::to_string(params.width()));
  }
  const Tensor row = Tensor::from_values({1, embedding.size()}, {embedding.begin(), embedding.end()});
  return squash(run_heads(row, params)).front();
}

MetricVector expected_score(const PredictedMetrics & p)
{
  MetricVector m;
  m.nc = 0.5 * p.nc[1] + p.nc[2];
  m.dac = p.dac;
  m.ddc = 0.5 * p.ddc[1] + p.ddc[2];
  m.tlc = p.tlc;
  m.ep = p.ep;
  m.ttc = p.ttc;
  m.lk = p.lk;
  m.hc = p.hc;
  return m;
}

std::size_t ternary_class(double label)
{
  if (label == 0.0) return 0;
  if (label == 0.5) return 1;
  if (label == 1.0) return 2;
  throw std::invalid_argument("ternary label must be 0, 0.5 or 1, got " + std::to_string(label));
}

PredictedMetrics as_prediction(const MetricVector & labels)
{
  PredictedMetrics p;
  p.nc = {0.0, 0.0, 0.0};
  p.nc[ternary_class(labels.nc)] = 1.0;
  p.ddc = {0.0, 0.0, 0.0};
  p.ddc[ternary_class(labels.ddc)] = 1.0;
  p.dac = labels.dac;
  p.tlc = labels.tlc;
  p.ep = labels.ep;
  p.ttc = labels.ttc;
  p.lk = labels.lk;
  p.hc = labels.hc;
  return p;
}

Tensor composite_loss(const HeadOutputs & outputs, std::span<const MetricVector> labels, const MetricLossWeights & w)
{
  const std::size_t n = outputs.rows();
  if (labels.size() != n) {
    throw std::invalid_argument("composite_loss: prediction and label counts differ");
  }
  if (n == 0) {
    throw std::invalid_argument("composite_loss: no candidates");
  }
  for (double wm : w.w) {
    if (!(wm >= 0.0)) throw std::invalid_argument("composite_loss: metric weights must be non-negative");
  }
  Tensor total;
  bool first = true;
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    const MetricId id = kAllMetrics[i];
    Tensor term;
    switch (metric_kind(id)) {
      case MetricKind::ternary: {
        std::vector<std::size_t> classes(n);
        for (std::size_t r = 0; r < n; ++r) classes[r] = ternary_class(labels[r].get(id));
        term = nn::cross_entropy_sum(outputs.logits[i], classes);
        break;
      }
      case MetricKind::binary: {
        std::vector<double> targets(n);
        for (std::size_t r = 0; r < n; ++r) targets[r] = binary_label(labels[r], id);
        term = nn::bce_with_logits_sum(outputs.logits[i], targets);
        break;
      }
      case MetricKind::continuous: {
        std::vector<double> targets(n);
        for (std::size_t r = 0; r < n; ++r) {
          targets[r] = labels[r].get(id);
          if (!(targets[r] >= 0.0 && targets[r] <= 1.0)) {
            throw std::invalid_argument("composite_loss: EP label outside [0, 1]");
          }
        }
        term = nn::squared_error_sum(nn::sigmoid(outputs.logits[i]), targets);
        break;
      }
    }
    term = nn::scale(term, w.w[i] / static_cast<double>(n));
    total = first ? term : nn::add(total, term);
    first = false;
  }
  return total;
}

double composite_loss(std::span<const PredictedMetrics> preds, std::span<const MetricVector> labels, const MetricLossWeights & w)
{
  if (preds.size() != labels.size()) {
    throw std::invalid_argument("composite_loss: prediction and label counts differ");
  }
  if (preds.empty()) {
    throw std::invalid_argument("composite_loss: no candidates");
  }
  const auto bce = [](double p, double y) {
    const double q = std::clamp(p, kProbabilityFloor, 1.0 - kProbabilityFloor);
    return -(y * std::log(q) + (1.0 - y) * std::log(1.0 - q));
  };
  const auto ce = [](const std::array<double, 3> & p, std::size_t c) {
    return -std::log(std::max(p[c], kProbabilityFloor));
  };
  std::array<double, kMetricCount> sums{};
  for (std::size_t r = 0; r < preds.size(); ++r) {
    const PredictedMetrics & p = preds[r];
    const MetricVector & y = labels[r];
    sums[metric_index(MetricId::nc)] += ce(p.nc, ternary_class(y.nc));
    sums[metric_index(MetricId::ddc)] += ce(p.ddc, ternary_class(y.ddc));
    sums[metric_index(MetricId::dac)] += bce(p.dac, binary_label(y, MetricId::dac));
    sums[metric_index(MetricId::tlc)] += bce(p.tlc, binary_label(y, MetricId::tlc));
    sums[metric_index(MetricId::ttc)] += bce(p.ttc, binary_label(y, MetricId::ttc));
    sums[metric_index(MetricId::lk)] += bce(p.lk, binary_label(y, MetricId::lk));
    sums[metric_index(MetricId::hc)] += bce(p.hc, binary_label(y, MetricId::hc));
    sums[metric_index(MetricId::ep)] += (p.ep - y.ep) * (p.ep - y.ep);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    total += w.w[i] * sums[i] / static_cast<double>(preds.size());
  }
  return total;
}

ScorerModel ScorerModel::init(const ModelConfig & config)
{
  ScorerModel m;
  m.config = config;
  Rng rng(mix_seed(config.seed, 0x5C0E));
  m.planner = PlannerParams::init(config.width, rng);
  m.scorer = ScorerParams::init(config.width, rng);
  return m;
}

nn::ParameterList ScorerModel::parameters() const
{
  nn::ParameterList out;
  planner.collect(out, "planner/");
  scorer.collect(out, "scorer/");
  return out;
}

ScorerModel clone(const ScorerModel & m)
{
  ScorerModel c;
  c.config = m.config;
  c.planner = clone(m.planner);
  c.scorer = clone(m.scorer);
  return c;
}

void save_model(std::ostream & out, const ScorerModel & model)
{
  nlohmann::json meta;
  meta["kind"] = "vocabplan-model";
  meta["width"] = model.config.width;
  meta["seed"] = model.config.seed;
  nn::write_parameters(out, model.parameters(), meta);
}

ScorerModel load_model(std::istream & in)
{
  nn::LoadedParameters loaded = nn::read_parameters(in);
  if (loaded.meta.value("kind", "") != "vocabplan-model") {
    throw std::invalid_argument("load_model: not a vocabplan model file");
  }
  ModelConfig config;
  config.width = loaded.meta.at("width").get<std::size_t>();
  config.seed = loaded.meta.at("seed").get<std::uint64_t>();
  ScorerModel model = ScorerModel::init(config);
  nn::ParameterList target = model.parameters();
  if (target.size() != loaded.params.size()) {
    throw std::invalid_argument("load_model: parameter count does not match the model layout");
  }
  nn::assign_parameters(loaded.params, target);
  return model;
}

PreparedScene prepare_scene(
  const Scene & scene, std::vector<Trajectory> candidates, std::vector<std::string> candidate_ids,
  std::vector<MetricVector> labels, std::size_t vocab_count, std::size_t expert_nearest,
  const BevGridSpec & spec)
{
  if (candidates.empty()) {
    throw std::invalid_argument("prepare_scene: no candidates for " + scene.id);
  }
  if (labels.size() != candidates.size() || candidate_ids.size() != candidates.size()) {
    throw std::invalid_argument("prepare_scene: missing labels for scene " + scene.id);
  }
  if (vocab_count > candidates.size() || expert_nearest >= vocab_count) {
    throw std::invalid_argument("prepare_scene: expert-nearest index must refer to a vocabulary entry");
  }
  PreparedScene p;
  p.id = scene.id;
  p.ego = scene.ego;
  p.agents = scene.agents;
  p.expert = scene.expert;
  p.vocab_count = vocab_count;
  p.expert_nearest = expert_nearest;
  const Tensor input = bev_input(render_bev(scene, spec), spec);
  p.samples = sample_inputs(input, candidates, spec);
  p.candidates = std::move(candidates);
  p.candidate_ids = std::move(candidate_ids);
  p.labels = std::move(labels);
  return p;
}

Tensor scene_embeddings(const PreparedScene & scene, const PlannerParams & planner)
{
  return refine_with_agents(embed_from_samples(scene.samples, scene.ego, planner), scene.agents, planner);
}

void validate_train_config(const TrainConfig & c)
{
  const auto fail = [](const std::string & what) { throw std::invalid_argument("train config: " + what); };
  if (c.epochs == 0) fail("epochs must be at least 1");
  if (c.batch_size == 0) fail("batch_size must be at least 1");
  if (!(c.learning_rate >= 0.0) || !std::isfinite(c.learning_rate)) fail("learning_rate must be finite and >= 0");
  if (!(c.weight_decay >= 0.0) || !std::isfinite(c.weight_decay)) fail("weight_decay must be finite and >= 0");
  if (!(c.imitation_weight >= 0.0) || !(c.scorer_weight >= 0.0)) fail("loss weights must be >= 0");
  for (double w : c.metric_weights.w) {
    if (!(w >= 0.0)) fail("metric weights must be >= 0");
  }
}

Tensor scene_loss(const PreparedScene & scene, const ScorerModel & model, const TrainConfig & config, LossBreakdown * parts)
{
  const Tensor fctx = scene_embeddings(scene, model.planner);
  const Tensor composite = composite_loss(run_heads(fctx, model.scorer), scene.labels, config.metric_weights);
  const std::size_t nearest[] = {scene.expert_nearest};
  const Tensor offsets = decode_offsets(nn::gather_rows(fctx, nearest), model.planner);
  const Tensor imitation = imitation_loss(offsets, scene.candidates[scene.expert_nearest], scene.expert);
  const Tensor total =
    nn::add(nn::scale(imitation, config.imitation_weight), nn::scale(composite, config.scorer_weight));
  if (parts != nullptr) {
    parts->imitation = imitation.item();
    parts->composite = composite.item();
    parts->total = total.item();
  }
  return total;
}

EvaluationReport evaluate_scorer(
  const ScorerModel & model, std::span<const PreparedScene> corpus, const EvaluationOptions & options)
{
  if (corpus.empty()) {
    throw std::invalid_argument("evaluate_scorer: empty corpus");
  }
  EvaluationReport report;
  report.scenes = corpus.size();
  std::array<std::size_t, kMetricCount> correct{};
  constexpr std::size_t kBins = 10;
  std::array<std::array<double, kBins>, kMetricCount> bin_p{};
  std::array<std::array<double, kBins>, kMetricCount> bin_y{};
  std::array<std::array<std::size_t, kBins>, kMetricCount> bin_n{};
  double ep_abs = 0.0;
  double regret_sum = 0.0;
  double random_sum = 0.0;

  for (const auto & scene : corpus) {
    std::vector<PredictedMetrics> preds;
    if (options.oracle_injection) {
      for (const auto & l : scene.labels) preds.push_back(as_prediction(l));
    } else {
      const Tensor fctx = scene_embeddings(scene, model.planner).detach();
      preds = squash(run_heads(fctx, model.scorer));
    }
    std::vector<double> predicted(preds.size());
    std::vector<double> oracle(preds.size());
    for (std::size_t i = 0; i < preds.size(); ++i) {
      const PredictedMetrics & p = preds[i];
      const MetricVector & y = scene.labels[i];
      predicted[i] = final_score(expected_score(p), options.weights);
      oracle[i] = final_score(y, options.weights);
      for (std::size_t m = 0; m < kMetricCount; ++m) {
        const MetricId id = kAllMetrics[m];
        if (metric_kind(id) == MetricKind::ternary) {
          const auto & dist = id == MetricId::nc ? p.nc : p.ddc;
          correct[m] += argmax3(dist) == ternary_class(y.get(id)) ? 1 : 0;
        } else if (metric_kind(id) == MetricKind::binary) {
          const double prob = expected_score(p).get(id);
          const double label = y.get(id);
          correct[m] += ((prob >= 0.5) == (label == 1.0)) ? 1 : 0;
          const std::size_t b = std::min(kBins - 1, static_cast<std::size_t>(prob * kBins));
          bin_p[m][b] += prob;
          bin_y[m][b] += label;
          ++bin_n[m][b];
        }
      }
      ep_abs += std::abs(p.ep - y.ep);
    }
    const std::size_t chosen = argmax_index(predicted);
    const double best = *std::max_element(oracle.begin(), oracle.end());
    const double mean = std::accumulate(oracle.begin(), oracle.end(), 0.0) / static_cast<double>(oracle.size());
    const double r = best - oracle[chosen];
    report.scene_regret.push_back(r);
    regret_sum += r;
    random_sum += best - mean;
    report.candidates += preds.size();
  }
  const double n = static_cast<double>(report.candidates);
  for (std::size_t m = 0; m < kMetricCount; ++m) {
    const MetricKind kind = metric_kind(kAllMetrics[m]);
    report.accuracy[m] = kind == MetricKind::continuous ? std::numeric_limits<double>::quiet_NaN()
                                                        : static_cast<double>(correct[m]) / n;
    if (kind == MetricKind::binary) {
      double ece = 0.0;
      for (std::size_t b = 0; b < kBins; ++b) {
        if (bin_n[m][b] == 0) continue;
        ece += std::abs(bin_p[m][b] - bin_y[m][b]) / n;
      }
      report.calibration_error[m] = ece;
    } else {
      report.calibration_error[m] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  report.ep_mae = ep_abs / n;
  report.regret = regret_sum / static_cast<double>(corpus.size());
  report.random_regret = random_sum / static_cast<double>(corpus.size());
  return report;
}

std::vector<EpochRecord> train(
  ScorerModel & model, std::span<const PreparedScene> train_set, std::span<const PreparedScene> heldout,
  const TrainConfig & config, const std::function<void(const EpochRecord &)> & on_epoch)
{
  validate_train_config(config);
  if (train_set.empty()) {
    throw std::invalid_argument("train: empty training set");
  }
  const std::size_t batches = (train_set.size() + config.batch_size - 1) / config.batch_size;
  nn::AdamWConfig opt_config;
  opt_config.learning_rate = config.learning_rate;
  opt_config.weight_decay = config.weight_decay;
  opt_config.horizon = batches * config.epochs;
  std::vector<Tensor> leaves;
  for (const auto & [name, t] : model.parameters()) leaves.push_back(t);
  nn::AdamW optimizer(opt_config, leaves);

  std::vector<EpochRecord> log;
  std::vector<std::size_t> order(train_set.size());
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    Rng rng(mix_seed(config.seed, 1000 + epoch));
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);

    EpochRecord record;
    record.epoch = epoch + 1;
    record.learning_rate = optimizer.current_learning_rate();
    for (std::size_t b = 0; b < batches; ++b) {
      const std::size_t lo = b * config.batch_size;
      const std::size_t hi = std::min(order.size(), lo + config.batch_size);
      const double inv = 1.0 / static_cast<double>(hi - lo);
      optimizer.zero_grad();
      for (std::size_t k = lo; k < hi; ++k) {
        const PreparedScene & scene = train_set[order[k]];
        LossBreakdown parts;
        try {
          Tensor loss = scene_loss(scene, model, config, &parts);
          if (!std::isfinite(parts.total)) {
            throw std::domain_error("non-finite loss");
          }
          nn::scale(loss, inv).backward();
        } catch (const std::domain_error & e) {
          std::ostringstream msg;
          msg << "training aborted at epoch " << epoch + 1 << ", step " << optimizer.steps_taken() + 1
              << ", scene " << scene.id << ": " << e.what();
          throw TrainingError(msg.str());
        }
        record.train.total += parts.total;
        record.train.imitation += parts.imitation;
        record.train.composite += parts.composite;
      }
      optimizer.step();
      for (const auto & t : leaves) {
        for (double v : t.values()) {
          if (!std::isfinite(v)) {
            throw TrainingError("training aborted: non-finite parameter after step " +
                                std::to_string(optimizer.steps_taken()));
          }
        }
      }
    }
    const double n = static_cast<double>(train_set.size());
    record.train.total /= n;
    record.train.imitation /= n;
    record.train.composite /= n;
    record.steps = optimizer.steps_taken();
    if (!heldout.empty()) {
      record.has_heldout = true;
      record.heldout = evaluate_scorer(model, heldout, {config.final_weights, false});
    }
    log.push_back(record);
    if (on_epoch) on_epoch(record);
  }
  return log;
}

std::string epoch_record_json(const EpochRecord & r)
{
  nlohmann::ordered_json j;
  j["epoch"] = r.epoch;
  j["learning_rate"] = r.learning_rate;
  j["steps"] = r.steps;
  j["train"] = {{"total", r.train.total}, {"imitation", r.train.imitation}, {"composite", r.train.composite}};
  if (r.has_heldout) {
    nlohmann::ordered_json acc;
    for (std::size_t m = 0; m < kMetricCount; ++m) {
      if (metric_kind(kAllMetrics[m]) != MetricKind::continuous) acc[metric_key(kAllMetrics[m])] = r.heldout.accuracy[m];
    }
    j["heldout"] = {{"accuracy", acc}, {"ep_mae", r.heldout.ep_mae}, {"regret", r.heldout.regret},
                    {"random_regret", r.heldout.random_regret}};
  }
  return j.dump();
}

}  // namespace vocabplan
