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

#include "vocabplan/selection.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

namespace vocabplan
{
namespace
{

const test::SmallCorpus & corpus()
{
  static const test::SmallCorpus c = test::small_corpus(24, 16, 4, 7);
  return c;
}

const ScorerModel & trained_model()
{
  static const ScorerModel m = [] {
    ScorerModel model = ScorerModel::init({16, 21});
    TrainConfig cfg;
    cfg.epochs = 3;
    cfg.batch_size = 4;
    cfg.learning_rate = 1e-3;
    train(model, corpus().prepared, {}, cfg);
    return model;
  }();
  return m;
}

PredictedMetrics perfect()
{
  return as_prediction(MetricVector{1, 1, 1, 1, 1, 1, 1, 1});
}

Vocabulary vocab_of(std::vector<Trajectory> entries)
{
  Vocabulary v;
  v.entries = std::move(entries);
  return v;
}

double oracle_score(const Scene & s, const Trajectory & t) { return final_score(eval_all(s, t), FinalScoreWeights{}); }

TEST(FilterDrivable, KeepsOnlyOnRoadCandidates)
{
  const Scene s = test::road_scene(6.0);
  const std::vector<Trajectory> c{test::straight(5.0), test::straight(5.0, 5.0), test::straight(2.0, -1.0)};
  const auto r = filter_drivable(c, s);
  EXPECT_EQ(r.survivors, (std::vector<std::size_t>{0, 2}));
  EXPECT_FALSE(r.bypassed);
}

TEST(FilterDrivable, BypassWhenEverythingFails)
{
  const Scene s = test::road_scene(6.0);
  const std::vector<Trajectory> c{test::straight(5.0, 5.0), test::straight(5.0, -6.0)};
  const auto r = filter_drivable(c, s);
  EXPECT_EQ(r.survivors, (std::vector<std::size_t>{0, 1}));
  EXPECT_TRUE(r.bypassed);
  EXPECT_TRUE(filter_drivable({}, s).survivors.empty());
}

TEST(RankCandidates, Examples)
{
  PredictedMetrics wrong_way = perfect();
  wrong_way.ddc = {1.0, 0.0, 0.0};
  PredictedMetrics bumped = perfect();
  bumped.nc = {0.0, 1.0, 0.0};
  const std::vector<PredictedMetrics> preds{wrong_way, perfect(), bumped};
  const auto r = rank_candidates(preds, FinalScoreWeights{});
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[0].index, 1u);
  EXPECT_EQ(r[0].score, 10.95);
  EXPECT_EQ(r[1].index, 2u);
  EXPECT_DOUBLE_EQ(r[1].score, 8.95);
  EXPECT_EQ(r[2].index, 0u);
  EXPECT_DOUBLE_EQ(r[2].score, 4.95);
  EXPECT_THROW(rank_candidates(std::vector<PredictedMetrics>{}, FinalScoreWeights{}), std::invalid_argument);
  const std::vector<std::size_t> short_ids{0};
  EXPECT_THROW(rank_candidates(preds, short_ids, FinalScoreWeights{}), std::invalid_argument);
}

TEST(RankCandidates, MatchesSortOracle)
{
  Rng rng(70);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.index(30);
    std::vector<PredictedMetrics> preds(n);
    std::vector<std::size_t> ids(n);
    for (std::size_t i = 0; i < n; ++i) {
      ids[i] = 100 + 3 * i;
      // Coarse values produce many exact ties.
      preds[i].dac = static_cast<double>(rng.index(3)) / 2.0;
      preds[i].ep = static_cast<double>(rng.index(2));
      preds[i].nc = {0.0, 0.0, 1.0};
      preds[i].ddc = {0.0, 0.0, 1.0};
    }
    const auto r = rank_candidates(preds, ids, FinalScoreWeights{});
    std::vector<std::pair<double, std::size_t>> oracle;
    for (std::size_t i = 0; i < n; ++i) oracle.emplace_back(-final_score(expected_score(preds[i]), {}), ids[i]);
    std::sort(oracle.begin(), oracle.end());
    for (std::size_t i = 0; i < n; ++i) {
      ASSERT_EQ(r[i].index, oracle[i].second);
      ASSERT_EQ(r[i].score, -oracle[i].first);
    }
  }
}

TEST(ScoreExternal, CandidateTrajectoryScoresLikeTheCandidate)
{
  const ScorerModel & model = trained_model();
  for (std::size_t i = 0; i < 4; ++i) {
    const Scene & s = corpus().scenes[i];
    const auto sel = select(s, model, corpus().vocab, nullptr, {.ranking_size = 1000});
    for (const auto & rc : sel.ranking) {
      const ExternalScore e = score_external(corpus().vocab.entries[rc.index], s, model);
      ASSERT_NEAR(e.s_final, rc.score, 1e-12) << s.id << " entry " << rc.index;
    }
  }
}

TEST(ScoreExternal, ZeroTrajectoryIsFinite)
{
  const ExternalScore e = score_external(Trajectory{}, corpus().scenes[0], trained_model());
  EXPECT_TRUE(std::isfinite(e.s_final));
  EXPECT_GE(e.s_final, 0.0);
  EXPECT_LE(e.s_final, 10.95);
}

TEST(Select, FreshModelDecodesVocabularyUnchanged)
{
  const ScorerModel model = ScorerModel::init({16, 22});
  const auto decoded = decode_candidates(corpus().scenes[0], model, corpus().vocab);
  ASSERT_EQ(decoded.size(), corpus().vocab.size());
  for (std::size_t i = 0; i < decoded.size(); ++i) EXPECT_EQ(decoded[i], corpus().vocab.entries[i]);
  EXPECT_TRUE(decode_candidates(corpus().scenes[0], model, Vocabulary{}).empty());
  EXPECT_THROW(select(corpus().scenes[0], model, Vocabulary{}, nullptr), std::invalid_argument);
}

TEST(Select, BetterExternalWinsAndTiesKeepE2e)
{
  // Ego at rest on a pad: holding still scores 10.94 (no progress), driving to the reference 10.95.
  const Scene s = test::pad_scene(20.0);
  const Vocabulary vocab = vocab_of({Trajectory{}});
  const ScorerModel model = ScorerModel::init({8, 23});
  const SelectOptions oracle{.oracle_injection = true};

  const Trajectory better = test::straight(5.0);
  const auto r = select(s, model, vocab, &better, oracle);
  EXPECT_DOUBLE_EQ(r.s_final_e2e, 10.94);
  ASSERT_TRUE(r.s_final_external.has_value());
  EXPECT_EQ(*r.s_final_external, 10.95);
  EXPECT_EQ(r.source, SelectionSource::external);
  EXPECT_EQ(r.chosen, better);
  EXPECT_STREQ(to_string(r.source), "external");

  const Trajectory same{};
  const auto tie = select(s, model, vocab, &same, oracle);
  EXPECT_EQ(tie.source, SelectionSource::e2e);
  EXPECT_EQ(tie.chosen, tie.e2e);

  const auto none = select(s, model, vocab, nullptr, oracle);
  EXPECT_FALSE(none.s_final_external.has_value());
  EXPECT_EQ(none.source, SelectionSource::e2e);
}

TEST(Select, OracleInjectionPicksTheBestSurvivor)
{
  const ScorerModel & model = trained_model();
  for (std::size_t i = 0; i < corpus().scenes.size(); ++i) {
    const Scene & s = corpus().scenes[i];
    const auto r = select(s, model, corpus().vocab, nullptr, {.oracle_injection = true});
    const auto decoded = decode_candidates(s, model, corpus().vocab);
    const auto filter = filter_drivable(corpus().vocab.entries, s);
    double best = 0.0;
    for (std::size_t k : filter.survivors) best = std::max(best, oracle_score(s, decoded[k]));
    ASSERT_EQ(r.s_final_e2e, best) << s.id;
    ASSERT_EQ(oracle_score(s, r.chosen), best);
    ASSERT_EQ(r.filtered_count, corpus().vocab.size() - filter.survivors.size());
  }
}

TEST(Select, InvariantToPositiveWeightScaling)
{
  const ScorerModel & model = trained_model();
  FinalScoreWeights doubled;
  doubled.nc *= 2.0;
  doubled.dac *= 2.0;
  doubled.ep *= 2.0;
  doubled.ttc *= 2.0;
  doubled.lk *= 2.0;
  doubled.ddc *= 2.0;
  for (std::size_t i = 0; i < 8; ++i) {
    const Scene & s = corpus().scenes[i];
    const auto a = select(s, model, corpus().vocab, nullptr);
    const auto b = select(s, model, corpus().vocab, nullptr, {.weights = doubled});
    ASSERT_EQ(a.chosen_index, b.chosen_index);
    ASSERT_EQ(a.chosen, b.chosen);
    ASSERT_NEAR(b.s_final_e2e, 2.0 * a.s_final_e2e, 1e-12);
  }
}

TEST(Select, ExternalNeverLowersTheOracleScore)
{
  const ScorerModel & model = trained_model();
  Rng rng(71);
  for (std::size_t i = 0; i < corpus().scenes.size(); ++i) {
    const Scene & s = corpus().scenes[i];
    const auto base = select(s, model, corpus().vocab, nullptr, {.oracle_injection = true});
    const Trajectory ext = i % 2 == 0 ? s.expert : test::random_trajectory(rng, 5.0);
    Trajectory wrapped = ext;
    for (auto & w : wrapped.waypoints) w.theta = wrap_angle(w.theta);
    const auto with = select(s, model, corpus().vocab, &wrapped, {.oracle_injection = true});
    ASSERT_GE(oracle_score(s, with.chosen), oracle_score(s, base.chosen)) << s.id;
  }
}

TEST(Select, RankingIsTruncatedAndSorted)
{
  const auto r = select(corpus().scenes[1], trained_model(), corpus().vocab, nullptr, {.ranking_size = 5});
  ASSERT_LE(r.ranking.size(), 5u);
  ASSERT_FALSE(r.ranking.empty());
  EXPECT_EQ(r.ranking.front().index, r.chosen_index);
  EXPECT_EQ(r.ranking.front().score, r.s_final_e2e);
  for (std::size_t i = 1; i < r.ranking.size(); ++i) EXPECT_GE(r.ranking[i - 1].score, r.ranking[i].score);
}

}  // namespace
}  // namespace vocabplan
