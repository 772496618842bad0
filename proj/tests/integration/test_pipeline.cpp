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

#include "corpus_support.hpp"
#include "test_support.hpp"

#include "vocabplan/io.hpp"
#include "vocabplan/pipeline.hpp"
#include "vocabplan/selection.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <stdexcept>
#include <vector>

namespace vocabplan
{
namespace
{

TEST(Pipeline, HeldoutSplit)
{
  EXPECT_FALSE(is_heldout(0, 6));
  EXPECT_TRUE(is_heldout(5, 6));
  EXPECT_TRUE(is_heldout(11, 6));
  std::size_t held = 0;
  for (std::size_t i = 0; i < 600; ++i) held += is_heldout(i, 6);
  EXPECT_EQ(held, 100u);

  std::vector<Scene> scenes;
  for (std::size_t i = 0; i < 12; ++i) scenes.push_back(generate_scene(SceneConfig{}, i));
  const auto experts = training_experts(scenes, 6);
  ASSERT_EQ(experts.size(), 10u);
  EXPECT_EQ(experts[5], scenes[6].expert);
}

TEST(Pipeline, AdversarialSeedDependsOnRunSeedAndId)
{
  EXPECT_EQ(adversarial_seed(42, "scene_000003"), adversarial_seed(42, "scene_000003"));
  EXPECT_NE(adversarial_seed(42, "scene_000003"), adversarial_seed(43, "scene_000003"));
  EXPECT_NE(adversarial_seed(42, "scene_000003"), adversarial_seed(42, "scene_000004"));
  EXPECT_EQ(adversarial_seed(42, "x"), mix_seed(42, io::fnv1a64("x")));
}

TEST(Pipeline, CandidateSetLayoutAndLabels)
{
  const auto c = test::small_corpus(6, 4, 3);
  const Scene & s = c.scenes[0];
  const CandidateSet set = make_candidate_set(s, c.vocab, 3, 42);
  ASSERT_EQ(set.trajectories.size(), 7u);
  EXPECT_EQ(set.vocab_count, 4u);
  EXPECT_EQ(set.ids.front(), "v0000");
  EXPECT_EQ(set.ids[4], "a000");
  const auto labels = label_candidates(s, set);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    // Every stored label equals a fresh single-pair oracle call.
    EXPECT_EQ(labels[i].metrics, eval_all(s, set.trajectories[i]));
    EXPECT_EQ(labels[i].final_score, final_score(labels[i].metrics, {}));
    EXPECT_EQ(labels[i].candidate_id, set.ids[i]);
  }
  auto shuffled = labels;
  std::swap(shuffled[0], shuffled[1]);
  EXPECT_THROW(match_labels(s.id, set, shuffled), std::invalid_argument);
  shuffled.pop_back();
  EXPECT_THROW(match_labels(s.id, set, shuffled), std::invalid_argument);

  const PreparedScene p = c.prepared[0];
  EXPECT_EQ(p.expert_nearest, nearest(c.vocab, s.expert).index);
}

TEST(Pipeline, EmptyRoadLabelsHaveNoCollisions)
{
  SceneConfig cfg;
  cfg.max_agents = 0;
  std::vector<Trajectory> experts;
  std::vector<Scene> scenes;
  for (std::size_t i = 0; i < 10; ++i) {
    scenes.push_back(generate_scene(cfg, i));
    experts.push_back(scenes.back().expert);
  }
  const Vocabulary vocab = build_vocabulary(experts, 5, 1, 2, 20);
  for (const auto & s : scenes) {
    const auto set = make_candidate_set(s, vocab, 4, 9);
    for (const auto & l : label_candidates(s, set)) EXPECT_EQ(l.metrics.nc, 1.0);
  }
}

TEST(Pipeline, ExplicitAdversarialCandidates)
{
  const auto c = test::small_corpus(4, 3, 0);
  const std::vector<io::NamedTrajectory> adv{{"a000", test::straight(3.0)}, {"a001", test::straight(1.0)}};
  const CandidateSet set = make_candidate_set(c.vocab, adv);
  ASSERT_EQ(set.trajectories.size(), 5u);
  EXPECT_EQ(set.ids[3], "a000");
  EXPECT_EQ(set.trajectories[4], adv[1].traj);
}

TEST(ParallelFor, EveryIndexOnceAndLowestErrorRethrown)
{
  for (std::size_t jobs : {1u, 3u, 8u}) {
    std::vector<std::atomic<int>> hits(97);
    parallel_for(97, jobs, [&](std::size_t i) { hits[i].fetch_add(1); });
    for (const auto & h : hits) ASSERT_EQ(h.load(), 1);
  }
  std::atomic<int> done{0};
  try {
    parallel_for(50, 4, [&](std::size_t i) {
      done.fetch_add(1);
      if (i == 31 || i == 17) throw std::runtime_error("fail " + std::to_string(i));
    });
    FAIL() << "expected an exception";
  } catch (const std::runtime_error & e) {
    EXPECT_STREQ(e.what(), "fail 17");
  }
  EXPECT_EQ(done.load(), 50);
  EXPECT_NO_THROW(parallel_for(0, 4, [](std::size_t) { throw std::runtime_error("never"); }));
}

TEST(Pipeline, TrainEvaluateSelectEndToEnd)
{
  const auto c = test::small_corpus(30, 8, 4, 5);
  std::vector<PreparedScene> train_set, heldout;
  for (std::size_t i = 0; i < c.prepared.size(); ++i) {
    (is_heldout(i, 6) ? heldout : train_set).push_back(c.prepared[i]);
  }
  ScorerModel model = ScorerModel::init({16, 5});
  const ScorerModel untrained = clone(model);
  TrainConfig cfg;
  cfg.epochs = 10;
  cfg.learning_rate = 1e-3;
  cfg.batch_size = 4;
  const auto log = train(model, train_set, heldout, cfg);
  ASSERT_EQ(log.size(), 10u);
  EXPECT_LT(log.back().train.total, log.front().train.total);

  const auto trained_report = evaluate_scorer(model, train_set);
  const auto untrained_report = evaluate_scorer(untrained, train_set);
  EXPECT_LE(trained_report.regret, untrained_report.regret);

  const auto oracle = evaluate_scorer(model, heldout, {FinalScoreWeights{}, true});
  EXPECT_EQ(oracle.regret, 0.0);

  for (std::size_t i = 0; i < 5; ++i) {
    const Scene & s = c.scenes[i];
    const auto r = select(s, model, c.vocab, &s.expert);
    ASSERT_TRUE(r.s_final_external.has_value());
    EXPECT_TRUE(r.source == SelectionSource::e2e || r.chosen == s.expert);
    EXPECT_NO_THROW(validate_trajectory(r.chosen));
  }
}

}  // namespace
}  // namespace vocabplan
