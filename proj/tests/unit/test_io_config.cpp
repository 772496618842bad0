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

#include "test_support.hpp"

#include "vocabplan/config.hpp"
#include "vocabplan/io.hpp"
#include "vocabplan/oracle.hpp"
#include "vocabplan/scene_gen.hpp"
#include "vocabplan/vocabulary.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <string>
#include <vector>

namespace vocabplan
{
namespace
{

namespace fs = std::filesystem;
using nlohmann::json;

std::string error_message(const std::function<void()> & f)
{
  try {
    f();
  } catch (const std::exception & e) {
    return e.what();
  }
  return {};
}

TEST(Fnv1a, KnownVectors)
{
  EXPECT_EQ(io::fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(io::fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(io::fnv1a64("foobar"), 0x85944171f73967e8ULL);
  EXPECT_EQ(io::hex64(0xabcULL), "0000000000000abc");
}

TEST(MaskRle, SmallExampleAndRoundTrip)
{
  DrivableMask m(5, 2, false);
  m.set(1, 0, true);
  m.set(2, 0, true);
  m.set(0, 1, true);
  const json j = io::mask_to_rle(m);
  EXPECT_EQ(j["rows"][0], json({1, 2, 2}));
  EXPECT_EQ(j["rows"][1], json({0, 1, 4}));
  const DrivableMask back = io::mask_from_rle(j);
  for (int v = 0; v < 2; ++v) {
    for (int u = 0; u < 5; ++u) EXPECT_EQ(back.at(u, v), m.at(u, v));
  }
}

TEST(MaskRle, RandomRoundTripAndCorruption)
{
  Rng rng(80);
  for (int trial = 0; trial < 50; ++trial) {
    DrivableMask m(1 + static_cast<int>(rng.index(40)), 1 + static_cast<int>(rng.index(40)), false);
    for (int v = 0; v < m.cells_y(); ++v) {
      for (int u = 0; u < m.cells_x(); ++u) m.set(u, v, rng.bernoulli(0.5));
    }
    const DrivableMask back = io::mask_from_rle(io::mask_to_rle(m));
    ASSERT_EQ(back.cells_x(), m.cells_x());
    for (int v = 0; v < m.cells_y(); ++v) {
      for (int u = 0; u < m.cells_x(); ++u) ASSERT_EQ(back.at(u, v), m.at(u, v));
    }
  }
  json bad = io::mask_to_rle(DrivableMask(4, 1, true));
  bad["rows"][0] = json({0, 3});
  EXPECT_ANY_THROW(io::mask_from_rle(bad));
}

TEST(SceneJson, RoundTripIsExact)
{
  for (std::size_t i = 0; i < 40; ++i) {
    const Scene s = generate_scene(SceneConfig{}, i);
    const json j = io::scene_to_json(s);
    const Scene back = io::scene_from_json(json::parse(io::dump_document(j)));
    ASSERT_EQ(io::dump_document(io::scene_to_json(back)), io::dump_document(j));
    ASSERT_EQ(back.expert, s.expert);
    ASSERT_EQ(back.agents.size(), s.agents.size());
    ASSERT_EQ(eval_all(back, s.expert), eval_all(s, s.expert));
  }
}

TEST(SceneJson, MissingFieldIsNamed)
{
  json j = io::scene_to_json(generate_scene(SceneConfig{}, 0));
  j.erase("route");
  EXPECT_NE(error_message([&] { io::scene_from_json(j); }).find("route"), std::string::npos);
}

TEST(TrajectoryJsonl, RoundTrip)
{
  Rng rng(81);
  std::vector<io::NamedTrajectory> records;
  for (int i = 0; i < 10; ++i) {
    Trajectory t = test::random_trajectory(rng, 30.0);
    for (auto & w : t.waypoints) w.theta = wrap_angle(w.theta);
    records.push_back({io::adversarial_id(static_cast<std::size_t>(i)), t});
  }
  const std::string text = io::trajectories_to_jsonl(records);
  const auto back = io::trajectories_from_jsonl(text);
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].id, records[i].id);
    EXPECT_EQ(back[i].traj, records[i].traj);
  }
  EXPECT_ANY_THROW(io::trajectories_from_jsonl("{\"id\": \"x\"}\n"));
}

TEST(VocabularyJson, RoundTripAndIds)
{
  std::vector<Trajectory> experts;
  for (std::size_t i = 0; i < 30; ++i) experts.push_back(generate_scene(SceneConfig{}, i).expert);
  const Vocabulary v = build_vocabulary(experts, 6, 3, 2, 20);
  const json j = io::vocabulary_to_json(v);
  const Vocabulary back = io::vocabulary_from_json(json::parse(j.dump()));
  ASSERT_EQ(back.size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(back.entries[i], v.entries[i]);
  EXPECT_EQ(back.meta.inertia, v.meta.inertia);
  EXPECT_EQ(back.meta.corpus_size, 30u);
  EXPECT_EQ(io::vocab_entry_id(0), "v0000");
  EXPECT_EQ(io::vocab_entry_id(8191), "v8191");
  EXPECT_EQ(io::adversarial_id(7), "a007");
}

TEST(LabelsJsonl, RoundTrip)
{
  const Scene s = generate_scene(SceneConfig{}, 9);
  std::vector<io::LabelRecord> records;
  const auto set = generate_adversarial_candidates(s, 6, 4);
  for (std::size_t i = 0; i < set.trajectories.size(); ++i) {
    const MetricVector m = eval_all(s, set.trajectories[i]);
    records.push_back({io::adversarial_id(i), m, final_score(m, {})});
  }
  const auto back = io::labels_from_jsonl(io::labels_to_jsonl(records));
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].candidate_id, records[i].candidate_id);
    EXPECT_EQ(back[i].metrics, records[i].metrics);
    EXPECT_EQ(back[i].final_score, records[i].final_score);
  }
}

TEST(Files, AtomicWriteAndRead)
{
  const fs::path dir = fs::temp_directory_path() / ("vocabplan_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
  fs::remove_all(dir);
  const fs::path file = dir / "nested" / "a.txt";
  io::write_file_atomic(file, "first");
  io::write_file_atomic(file, "second");
  EXPECT_EQ(io::read_file(file), "second");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto & e : fs::directory_iterator(file.parent_path())) ++entries;
  EXPECT_EQ(entries, 1u);
  EXPECT_ANY_THROW(io::read_file(dir / "missing.txt"));
  fs::remove_all(dir);
}

TEST(RunConfig, JsonRoundTrip)
{
  RunConfig c;
  c.seed = 7;
  c.jobs = 3;
  c.scene_count = 120;
  c.vocab_size = 64;
  c.width = 48;
  c.training.epochs = 5;
  c.training.metric_weights.w[2] = 2.5;
  c.scenes.families = {RoadFamily::curve_left, RoadFamily::t_intersection};
  c.oracle.ttc_substep = 0.05;
  const RunConfig back = run_config_from_json(json::parse(run_config_to_json(c).dump()));
  EXPECT_EQ(back, c);
  EXPECT_EQ(config_hash(run_config_to_json(back)), config_hash(run_config_to_json(c)));
  EXPECT_NE(config_hash(run_config_to_json(RunConfig{})), config_hash(run_config_to_json(c)));
  EXPECT_EQ(run_config_from_json(json::object()), RunConfig{});
}

TEST(RunConfig, PartialOverrideKeepsBase)
{
  RunConfig base;
  base.width = 64;
  const RunConfig c = run_config_from_json(json::parse(R"({"training": {"epochs": 3}})"), base);
  EXPECT_EQ(c.training.epochs, 3u);
  EXPECT_EQ(c.width, 64u);
  EXPECT_EQ(c.training.batch_size, 8u);
}

TEST(RunConfig, UnknownAndMistypedKeysAreNamed)
{
  EXPECT_THROW(run_config_from_json(json::parse(R"({"trainig": {}})")), ConfigError);
  EXPECT_NE(error_message([] { run_config_from_json(json::parse(R"({"training": {"epoch": 3}})")); })
              .find("training.epoch"),
            std::string::npos);
  EXPECT_NE(error_message([] { run_config_from_json(json::parse(R"({"model": {"width": "wide"}})")); })
              .find("model.width"),
            std::string::npos);
  EXPECT_NE(error_message([] { run_config_from_json(json::parse(R"({"scenes": {"families": ["spiral"]}})")); })
              .find("spiral"),
            std::string::npos);
}

TEST(RunConfig, RangeErrorsNameTheKey)
{
  const auto message_for = [](const char * text) {
    return error_message([&] { run_config_from_json(json::parse(text)); });
  };
  EXPECT_NE(message_for(R"({"jobs": 0})").find("jobs"), std::string::npos);
  EXPECT_NE(message_for(R"({"vocabulary": {"size": 0}})").find("vocabulary.size"), std::string::npos);
  EXPECT_NE(message_for(R"({"training": {"learning_rate": -1}})").find("training.learning_rate"), std::string::npos);
  EXPECT_NE(message_for(R"({"oracle": {"lk_min_steps": 9}})").find("oracle.lk_min_steps"), std::string::npos);
  EXPECT_NE(message_for(R"({"scenes": {"min_agents": 9, "max_agents": 2}})").find("scenes.min_agents"), std::string::npos);
  EXPECT_NE(message_for(R"({"heldout_every": 1})").find("heldout_every"), std::string::npos);
  RunConfig c;
  c.width = 0;
  EXPECT_THROW(validate_run_config(c), ConfigError);
}

TEST(RunConfig, StageSeedsFollowTopLevelSeed)
{
  RunConfig c;
  c.seed = 1234;
  EXPECT_EQ(effective_scene_config(c).seed, 1234u);
  EXPECT_EQ(effective_train_config(c).seed, 1234u);
}

TEST(RunConfig, LoadFromFile)
{
  const fs::path file = fs::temp_directory_path() / "vocabplan_config_test.json";
  io::write_file_atomic(file, R"({"seed": 5, "scenes": {"count": 30}})");
  const RunConfig c = load_run_config(file.string());
  EXPECT_EQ(c.seed, 5u);
  EXPECT_EQ(c.scene_count, 30u);
  fs::remove(file);
  EXPECT_ANY_THROW(load_run_config((fs::temp_directory_path() / "vocabplan_missing.json").string()));
}

}  // namespace
}  // namespace vocabplan
