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

#ifndef VOCABPLAN__CONFIG_HPP_
#define VOCABPLAN__CONFIG_HPP_

#include "vocabplan/oracle.hpp"
#include "vocabplan/planner.hpp"
#include "vocabplan/scene_gen.hpp"
#include "vocabplan/scorer.hpp"
#include "vocabplan/vocabulary.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace vocabplan
{

/// Invalid configuration; the message names the offending key.
class ConfigError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

struct RunPaths
{
  std::string corpus_dir{"corpus/scenes"};
  std::string vocab_file{"corpus/vocab.json"};
  std::string labels_dir{"corpus/labels"};
  std::string model_file{"run/model.bin"};
  std::string report_dir{"run"};
};

inline constexpr std::size_t kDefaultSceneCount = 600;
inline constexpr std::size_t kDefaultHeldoutEvery = 6;
inline constexpr std::size_t kDefaultAdversarialCount = 16;
inline constexpr std::size_t kMaxVocabularySize = 65536;
inline constexpr std::size_t kMaxPlannerWidth = 1024;
inline constexpr std::size_t kMaxJobs = 256;

struct RunConfig
{
  std::uint64_t seed{42};
  std::size_t jobs{1};
  RunPaths paths{};
  SceneConfig scenes{};
  std::size_t scene_count{kDefaultSceneCount};
  // Scene i is held out when i % heldout_every == heldout_every - 1.
  std::size_t heldout_every{kDefaultHeldoutEvery};
  std::size_t vocab_size{kDefaultVocabularySize};
  std::size_t kmeans_restarts{8};
  std::size_t kmeans_max_iters{100};
  std::size_t adversarial_count{kDefaultAdversarialCount};
  AdversarialConfig adversarial{};
  std::size_t width{kDefaultPlannerWidth};
  TrainConfig training{};
  OracleConfig oracle{};

  bool operator==(const RunConfig & other) const;
};

/// Throws ConfigError naming the first out-of-range field.
void validate_run_config(const RunConfig & config);

nlohmann::json run_config_to_json(const RunConfig & config);

/// Starts from `base` and applies every key present in `j`; unknown keys and wrong types are
/// rejected with their dotted path. The result is validated.
RunConfig run_config_from_json(const nlohmann::json & j, const RunConfig & base = {});

/// Reads a JSON config file on top of the defaults.
RunConfig load_run_config(const std::string & path);

/// The seeds of the per-stage configurations follow the top-level seed.
SceneConfig effective_scene_config(const RunConfig & config);
TrainConfig effective_train_config(const RunConfig & config);

/// FNV-1a of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const nlohmann::json & j);

}  // namespace vocabplan

#endif  // VOCABPLAN__CONFIG_HPP_
