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

// Drives the vocabplan executable end to end in scratch directories.
#include "test_support.hpp"

#include "vocabplan/io.hpp"
#include "vocabplan/oracle.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>

#ifndef VOCABPLAN_CLI_PATH
#error "VOCABPLAN_CLI_PATH must name the CLI executable"
#endif

namespace vocabplan
{
namespace
{

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult
{
  int exit_code{-1};
  std::string output;
};

class CliTest : public ::testing::Test
{
protected:
  void SetUp() override
  {
    const auto * info = ::testing::UnitTest::GetInstance()->current_test_info();
    root_ = fs::temp_directory_path() / (std::string("vocabplan_cli_") + info->name());
    fs::remove_all(root_);
    fs::create_directories(root_);
  }

  void TearDown() override { fs::remove_all(root_); }

  // Runs the CLI with `args` inside `cwd` (relative to the scratch root).
  RunResult run(const std::string & args, const std::string & cwd = ".")
  {
    const fs::path dir = root_ / cwd;
    fs::create_directories(dir);
    const fs::path log = root_ / "last_output.txt";
    const std::string cmd = "cd '" + dir.string() + "' && '" + std::string(VOCABPLAN_CLI_PATH) + "' " + args +
                            " > '" + log.string() + "' 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.output = io::read_file(log);
    return r;
  }

  void expect_ok(const std::string & args, const std::string & cwd = ".")
  {
    const RunResult r = run(args, cwd);
    ASSERT_EQ(r.exit_code, 0) << args << "\n" << r.output;
  }

  // Relative path -> file bytes for every regular file below `dir`.
  std::map<std::string, std::string> snapshot(const fs::path & dir) const
  {
    std::map<std::string, std::string> files;
    for (const auto & e : fs::recursive_directory_iterator(root_ / dir)) {
      if (e.is_regular_file()) files[fs::relative(e.path(), root_ / dir).string()] = io::read_file(e.path());
    }
    return files;
  }

  // Small corpus, vocabulary and labels in `cwd`.
  void build_corpus(const std::string & cwd, const std::string & extra = "")
  {
    expect_ok("scenes generate --count 18 --seed 7 --out scenes" + extra, cwd);
    expect_ok("vocab build --experts scenes --m 6 --seed 7 --out vocab.json" + extra, cwd);
    expect_ok("labels compute --scenes scenes --vocab vocab.json --adversarial 3 --seed 7 --out labels" + extra, cwd);
  }

  std::string train_args(std::size_t epochs) const
  {
    return "train --scenes scenes --vocab vocab.json --labels labels --epochs " + std::to_string(epochs) +
           " --width 8 --batch-size 4 --seed 7 --out run";
  }

  fs::path root_;
};

TEST_F(CliTest, GenerateTwoScenesWritesFilesAndManifest)
{
  expect_ok("scenes generate --count 2 --seed 7 --out s");
  const auto files = snapshot("s");
  ASSERT_EQ(files.size(), 3u);
  EXPECT_TRUE(files.count("manifest.json"));
  EXPECT_TRUE(files.count("scene_000000.json"));
  EXPECT_TRUE(files.count("scene_000001.json"));
  const json manifest = json::parse(files.at("manifest.json"));
  EXPECT_EQ(manifest["count"], 2);
  EXPECT_EQ(manifest["seed"], 7);
}

TEST_F(CliTest, GenerateZeroScenesSucceeds)
{
  expect_ok("scenes generate --count 0 --out s");
  const json manifest = json::parse(io::read_file(root_ / "s" / "manifest.json"));
  EXPECT_EQ(manifest["count"], 0);
  EXPECT_TRUE(manifest["files"].empty());
}

TEST_F(CliTest, UnwritableDirectoryFails)
{
  io::write_file_atomic(root_ / "blocker", "a file, not a directory");
  const RunResult r = run("scenes generate --count 1 --out blocker/s");
  EXPECT_NE(r.exit_code, 0);
  EXPECT_FALSE(r.output.empty());
}

TEST_F(CliTest, StagesAreByteIdenticalAcrossRuns)
{
  build_corpus("a");
  expect_ok(train_args(2), "a");
  build_corpus("b");
  expect_ok(train_args(2), "b");
  const auto a = snapshot("a");
  const auto b = snapshot("b");
  ASSERT_GT(a.size(), 40u);
  ASSERT_EQ(a.size(), b.size());
  for (const auto & [path, bytes] : a) {
    ASSERT_TRUE(b.count(path)) << path;
    EXPECT_EQ(bytes, b.at(path)) << path;
  }
}

TEST_F(CliTest, WorkerCountDoesNotChangeOutputs)
{
  build_corpus("one", " --jobs 1");
  build_corpus("four", " --jobs 4");
  EXPECT_EQ(snapshot("one"), snapshot("four"));
}

TEST_F(CliTest, VocabularyErrorsAndSingleEntry)
{
  expect_ok("scenes generate --count 6 --out s");
  // Five training experts: six entries cannot be fitted.
  EXPECT_NE(run("vocab build --experts s --m 6 --out v.json").exit_code, 0);
  expect_ok("vocab build --experts s --m 1 --out v.json");
  const json v = json::parse(io::read_file(root_ / "v.json"));
  ASSERT_EQ(v["entries"].size(), 1u);
  EXPECT_NE(run("labels compute --scenes s --vocab missing.json --out l").exit_code, 0);
}

TEST_F(CliTest, LabelsMatchSinglePairOracle)
{
  build_corpus(".");
  const Scene scene = io::scene_from_json(json::parse(io::read_file(root_ / "scenes" / "scene_000004.json")));
  const auto adversarial = io::trajectories_from_jsonl(io::read_file(root_ / "labels" / "scene_000004.candidates.jsonl"));
  const auto labels = io::labels_from_jsonl(io::read_file(root_ / "labels" / "scene_000004.labels.jsonl"));
  ASSERT_EQ(adversarial.size(), 3u);
  ASSERT_EQ(labels.size(), 9u);
  for (std::size_t i = 0; i < adversarial.size(); ++i) {
    const auto & rec = labels[6 + i];
    EXPECT_EQ(rec.candidate_id, adversarial[i].id);
    EXPECT_EQ(rec.metrics, eval_all(scene, adversarial[i].traj));
  }
}

TEST_F(CliTest, TrainOneEpochWritesModelAndLog)
{
  build_corpus(".");
  expect_ok(train_args(1));
  EXPECT_TRUE(fs::exists(root_ / "run" / "model.bin"));
  std::istringstream log(io::read_file(root_ / "run" / "train_log.jsonl"));
  std::string line;
  std::size_t lines = 0;
  while (std::getline(log, line)) {
    const json j = json::parse(line);
    EXPECT_EQ(j["epoch"], 1);
    EXPECT_TRUE(j["train"]["total"].is_number());
    ++lines;
  }
  EXPECT_EQ(lines, 1u);
  // The dumped effective configuration reloads unchanged.
  const json cfg = json::parse(io::read_file(root_ / "run" / "config.json"));
  EXPECT_EQ(cfg["training"]["epochs"], 1);
  expect_ok("evaluate --config run/config.json --scenes scenes --vocab vocab.json --labels labels "
            "--model run/model.bin --out ev");
}

TEST_F(CliTest, EvaluateWithOracleInjectionReportsZeroRegret)
{
  build_corpus(".");
  expect_ok(train_args(1));
  expect_ok("evaluate --scenes scenes --vocab vocab.json --labels labels --model run/model.bin "
            "--oracle-injection --split all --out ev");
  const json report = json::parse(io::read_file(root_ / "ev" / "evaluation.json"));
  EXPECT_EQ(report["regret"], 0.0);
  EXPECT_EQ(report["scenes"], 18);
  EXPECT_EQ(report["accuracy"]["drivable_area_compliance"], 1.0);
}

TEST_F(CliTest, SelectWithExternalReportsBothScores)
{
  build_corpus(".");
  expect_ok(train_args(1));
  const std::vector<io::NamedTrajectory> ext{{"scene_000002", test::straight(4.0)}};
  io::write_file_atomic(root_ / "vla.jsonl", io::trajectories_to_jsonl(ext));
  expect_ok("select --scenes scenes --vocab vocab.json --model run/model.bin --external vla.jsonl "
            "--scene scene_000002 --out sel");
  std::istringstream in(io::read_file(root_ / "sel" / "selection.jsonl"));
  std::string line;
  ASSERT_TRUE(std::getline(in, line));
  const json r = json::parse(line);
  EXPECT_EQ(r["scene_id"], "scene_000002");
  EXPECT_TRUE(r["s_final_e2e"].is_number());
  EXPECT_TRUE(r["s_final_external"].is_number());
  EXPECT_FALSE(std::getline(in, line));
}

TEST_F(CliTest, ConfigErrorsNameTheKey)
{
  io::write_file_atomic(root_ / "bad.json", R"({"training": {"epochz": 3}})");
  const RunResult r = run("scenes generate --count 1 --config bad.json --out s");
  EXPECT_NE(r.exit_code, 0);
  EXPECT_NE(r.output.find("training.epochz"), std::string::npos) << r.output;
  EXPECT_NE(run("no-such-command").exit_code, 0);
}

}  // namespace
}  // namespace vocabplan
