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

// vocabplan command-line entry point.
//
//   vocabplan scenes generate --count N --seed S --out DIR
//   vocabplan vocab build --experts DIR --m M --seed S --out FILE
//   vocabplan labels compute --scenes DIR --vocab FILE --out DIR
//   vocabplan train --scenes DIR --vocab FILE --labels DIR --out DIR
//   vocabplan evaluate --scenes DIR --vocab FILE --labels DIR --model FILE --out DIR [--oracle-injection]
//   vocabplan select --scenes DIR --vocab FILE --model FILE --out DIR [--external FILE]
//
// Settings come from the defaults, then --config FILE, then explicit flags.

#include "vocabplan/config.hpp"
#include "vocabplan/io.hpp"
#include "vocabplan/pipeline.hpp"
#include "vocabplan/scene_gen.hpp"
#include "vocabplan/scorer.hpp"
#include "vocabplan/selection.hpp"
#include "vocabplan/vocabulary.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace vocabplan;

namespace
{

constexpr const char * kSceneManifestKind = "vocabplan-scenes";
constexpr const char * kLabelManifestKind = "vocabplan-labels";
constexpr const char * kManifestName = "manifest.json";

struct CommonFlags
{
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
};

RunConfig resolve_config(const CommonFlags & flags)
{
  RunConfig c = flags.config_file.empty() ? RunConfig{} : load_run_config(flags.config_file);
  if (flags.seed) c.seed = *flags.seed;
  if (flags.jobs) c.jobs = *flags.jobs;
  validate_run_config(c);
  return c;
}

json nan_as_null(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

// ---------------------------------------------------------------------------------------------
// Corpus loading

struct SceneCorpus
{
  json manifest;
  std::vector<Scene> scenes;
};

SceneCorpus load_scenes(const fs::path & dir, std::size_t jobs)
{
  SceneCorpus corpus;
  corpus.manifest = json::parse(io::read_file(dir / kManifestName));
  if (corpus.manifest.value("kind", "") != kSceneManifestKind) {
    throw io::FormatError((dir / kManifestName).string() + " is not a scene manifest");
  }
  const auto files = corpus.manifest.at("files").get<std::vector<std::string>>();
  corpus.scenes.resize(files.size());
  parallel_for(files.size(), jobs, [&](std::size_t i) {
    try {
      corpus.scenes[i] = io::scene_from_json(json::parse(io::read_file(dir / files[i])));
    } catch (const std::exception & e) {
      throw io::FormatError(files[i] + ": " + e.what());
    }
  });
  return corpus;
}

Vocabulary load_vocab(const fs::path & file)
{
  return io::vocabulary_from_json(json::parse(io::read_file(file)));
}

fs::path labels_path(const fs::path & dir, const std::string & id) { return dir / (id + ".labels.jsonl"); }
fs::path candidates_path(const fs::path & dir, const std::string & id) { return dir / (id + ".candidates.jsonl"); }

PreparedScene load_prepared(const Scene & scene, const Vocabulary & vocab, const fs::path & labels_dir)
{
  if (!fs::exists(labels_path(labels_dir, scene.id))) {
    throw std::runtime_error("missing labels for scene " + scene.id);
  }
  const auto adversarial = io::trajectories_from_jsonl(io::read_file(candidates_path(labels_dir, scene.id)));
  CandidateSet candidates = make_candidate_set(vocab, adversarial);
  const auto records = io::labels_from_jsonl(io::read_file(labels_path(labels_dir, scene.id)));
  auto labels = match_labels(scene.id, candidates, records);
  return prepare_labeled_scene(scene, vocab, std::move(candidates), std::move(labels));
}

struct LabeledCorpus
{
  std::vector<PreparedScene> train;
  std::vector<PreparedScene> heldout;
};

LabeledCorpus load_labeled(
  const SceneCorpus & corpus, const Vocabulary & vocab, const fs::path & labels_dir, const RunConfig & cfg)
{
  std::vector<PreparedScene> all(corpus.scenes.size());
  parallel_for(all.size(), cfg.jobs, [&](std::size_t i) { all[i] = load_prepared(corpus.scenes[i], vocab, labels_dir); });
  LabeledCorpus out;
  for (std::size_t i = 0; i < all.size(); ++i) {
    (is_heldout(i, cfg.heldout_every) ? out.heldout : out.train).push_back(std::move(all[i]));
  }
  return out;
}

ScorerModel load_model_file(const fs::path & file)
{
  std::istringstream in(io::read_file(file));
  return load_model(in);
}

// ---------------------------------------------------------------------------------------------
// Reports

json evaluation_json(const EvaluationReport & r, bool oracle_injection, const std::string & split)
{
  json accuracy = json::object();
  json calibration = json::object();
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    const MetricId id = kAllMetrics[i];
    if (id == MetricId::ep) {
      continue;
    }
    accuracy[metric_report_name(id)] = nan_as_null(r.accuracy[i]);
    if (!std::isnan(r.calibration_error[i])) {
      calibration[metric_report_name(id)] = r.calibration_error[i];
    }
  }
  return {
    {"split", split},
    {"oracle_injection", oracle_injection},
    {"scenes", r.scenes},
    {"candidates", r.candidates},
    {"accuracy", accuracy},
    {"calibration_error", calibration},
    {"ego_progress_mae", r.ep_mae},
    {"regret", r.regret},
    {"random_regret", r.random_regret},
  };
}

json selection_json(const std::string & scene_id, const SelectionResult & r)
{
  json ranking = json::array();
  for (const auto & c : r.ranking) ranking.push_back({{"index", c.index}, {"id", io::vocab_entry_id(c.index)}, {"score", c.score}});
  json j = {
    {"scene_id", scene_id},
    {"source", to_string(r.source)},
    {"chosen", io::trajectory_to_json(r.chosen)},
    {"e2e_index", r.chosen_index},
    {"e2e", io::trajectory_to_json(r.e2e)},
    {"s_final_e2e", r.s_final_e2e},
    {"s_final_external", r.s_final_external ? json(*r.s_final_external) : json(nullptr)},
    {"filtered_count", r.filtered_count},
    {"filter_bypassed", r.filter_bypassed},
    {"ranking", ranking},
  };
  return j;
}

// ---------------------------------------------------------------------------------------------
// Commands

int cmd_scenes_generate(const CommonFlags & flags, std::optional<std::size_t> count, const std::string & out)
{
  RunConfig cfg = resolve_config(flags);
  if (count) cfg.scene_count = *count;
  const SceneConfig scfg = effective_scene_config(cfg);
  validate_scene_config(scfg);
  const fs::path dir(out);
  std::vector<std::string> files(cfg.scene_count);
  parallel_for(cfg.scene_count, cfg.jobs, [&](std::size_t i) {
    const Scene scene = generate_scene(scfg, i);
    files[i] = scene.id + ".json";
    io::write_file_atomic(dir / files[i], io::dump_document(io::scene_to_json(scene)));
  });
  json config = run_config_to_json(cfg).at("scenes");
  config["seed"] = cfg.seed;
  const json manifest = {
    {"kind", kSceneManifestKind}, {"count", cfg.scene_count}, {"seed", cfg.seed},
    {"config_hash", config_hash(config)}, {"config", config}, {"files", files},
  };
  io::write_file_atomic(dir / kManifestName, io::dump_document(manifest));
  std::cout << "wrote " << cfg.scene_count << " scenes to " << dir.string() << "\n";
  return 0;
}

int cmd_vocab_build(
  const CommonFlags & flags, const std::string & experts_dir, std::optional<std::size_t> m, bool all_scenes,
  const std::string & out)
{
  RunConfig cfg = resolve_config(flags);
  if (m) cfg.vocab_size = *m;
  validate_run_config(cfg);
  const SceneCorpus corpus = load_scenes(experts_dir, cfg.jobs);
  std::vector<Trajectory> experts;
  if (all_scenes) {
    for (const auto & s : corpus.scenes) experts.push_back(s.expert);
  } else {
    experts = training_experts(corpus.scenes, cfg.heldout_every);
  }
  const Vocabulary vocab = build_vocabulary(experts, cfg.vocab_size, cfg.seed, cfg.kmeans_restarts, cfg.kmeans_max_iters);
  io::write_file_atomic(out, io::dump_document(io::vocabulary_to_json(vocab)));
  std::ostringstream inertia;
  inertia.precision(17);
  inertia << vocab.meta.inertia;
  std::cout << "vocabulary of " << vocab.size() << " entries from " << experts.size()
            << " experts, final inertia " << inertia.str() << "\n";
  return 0;
}

int cmd_labels_compute(
  const CommonFlags & flags, const std::string & scenes_dir, const std::string & vocab_file,
  std::optional<std::size_t> adversarial, const std::string & out)
{
  RunConfig cfg = resolve_config(flags);
  if (adversarial) cfg.adversarial_count = *adversarial;
  validate_run_config(cfg);
  if (!fs::exists(vocab_file)) {
    throw std::runtime_error("missing vocabulary file " + vocab_file);
  }
  const Vocabulary vocab = load_vocab(vocab_file);
  const SceneCorpus corpus = load_scenes(scenes_dir, cfg.jobs);
  const fs::path dir(out);
  const auto & scenes = corpus.scenes;
  parallel_for(scenes.size(), cfg.jobs, [&](std::size_t i) {
    const CandidateSet candidates = make_candidate_set(scenes[i], vocab, cfg.adversarial_count, cfg.seed, cfg.adversarial);
    std::vector<io::NamedTrajectory> adv;
    for (std::size_t k = candidates.vocab_count; k < candidates.trajectories.size(); ++k) {
      adv.push_back({candidates.ids[k], candidates.trajectories[k]});
    }
    const auto labels = label_candidates(scenes[i], candidates, cfg.oracle, cfg.training.final_weights);
    io::write_file_atomic(candidates_path(dir, scenes[i].id), io::trajectories_to_jsonl(adv));
    io::write_file_atomic(labels_path(dir, scenes[i].id), io::labels_to_jsonl(labels));
  });
  std::vector<std::string> ids;
  for (const auto & s : scenes) ids.push_back(s.id);
  json config = {{"seed", cfg.seed}, {"adversarial", run_config_to_json(cfg).at("adversarial")},
                 {"oracle", run_config_to_json(cfg).at("oracle")},
                 {"final_score_weights", run_config_to_json(cfg).at("final_score_weights")},
                 {"vocab_size", vocab.size()}, {"scenes_config_hash", corpus.manifest.value("config_hash", "")}};
  const json manifest = {{"kind", kLabelManifestKind}, {"config_hash", config_hash(config)}, {"config", config}, {"scenes", ids}};
  io::write_file_atomic(dir / kManifestName, io::dump_document(manifest));
  std::cout << "labeled " << scenes.size() << " scenes x " << vocab.size() + cfg.adversarial_count << " candidates\n";
  return 0;
}

struct TrainFlags
{
  std::optional<std::size_t> epochs;
  std::optional<double> lr;
  std::optional<std::size_t> batch_size;
  std::optional<std::size_t> width;
};

int cmd_train(
  const CommonFlags & flags, const TrainFlags & tf, const std::string & scenes_dir, const std::string & vocab_file,
  const std::string & labels_dir, const std::string & out)
{
  RunConfig cfg = resolve_config(flags);
  if (tf.epochs) cfg.training.epochs = *tf.epochs;
  if (tf.lr) cfg.training.learning_rate = *tf.lr;
  if (tf.batch_size) cfg.training.batch_size = *tf.batch_size;
  if (tf.width) cfg.width = *tf.width;
  const fs::path dir(out);
  cfg.paths.corpus_dir = scenes_dir;
  cfg.paths.vocab_file = vocab_file;
  cfg.paths.labels_dir = labels_dir;
  cfg.paths.report_dir = dir.string();
  cfg.paths.model_file = (dir / "model.bin").string();
  validate_run_config(cfg);

  const Vocabulary vocab = load_vocab(vocab_file);
  const SceneCorpus corpus = load_scenes(scenes_dir, cfg.jobs);
  const LabeledCorpus data = load_labeled(corpus, vocab, labels_dir, cfg);
  if (data.train.empty()) {
    throw std::runtime_error("no training scenes in " + scenes_dir);
  }
  ScorerModel model = ScorerModel::init({cfg.width, cfg.seed});
  std::string log;
  train(model, data.train, data.heldout, effective_train_config(cfg), [&](const EpochRecord & r) {
    const std::string line = epoch_record_json(r);
    log += line + "\n";
    std::cout << line << "\n";
  });
  std::ostringstream model_bytes;
  save_model(model_bytes, model);
  io::write_file_atomic(cfg.paths.model_file, model_bytes.str());
  io::write_file_atomic(dir / "train_log.jsonl", log);
  io::write_file_atomic(dir / "config.json", io::dump_document(run_config_to_json(cfg)));
  std::cout << "model written to " << cfg.paths.model_file << "\n";
  return 0;
}

int cmd_evaluate(
  const CommonFlags & flags, const std::string & scenes_dir, const std::string & vocab_file,
  const std::string & labels_dir, const std::string & model_file, const std::string & split, bool oracle_injection,
  const std::string & out)
{
  const RunConfig cfg = resolve_config(flags);
  const Vocabulary vocab = load_vocab(vocab_file);
  const SceneCorpus corpus = load_scenes(scenes_dir, cfg.jobs);
  LabeledCorpus data = load_labeled(corpus, vocab, labels_dir, cfg);
  std::vector<PreparedScene> selected;
  if (split == "heldout" || split == "all") {
    for (auto & s : data.heldout) selected.push_back(std::move(s));
  }
  if (split == "train" || split == "all") {
    for (auto & s : data.train) selected.push_back(std::move(s));
  }
  const ScorerModel model = load_model_file(model_file);
  EvaluationOptions options;
  options.weights = cfg.training.final_weights;
  options.oracle_injection = oracle_injection;
  const EvaluationReport report = evaluate_scorer(model, selected, options);
  const json j = evaluation_json(report, oracle_injection, split);
  io::write_file_atomic(fs::path(out) / "evaluation.json", io::dump_document(j));
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_select(
  const CommonFlags & flags, const std::string & scenes_dir, const std::string & vocab_file,
  const std::string & model_file, const std::string & external_file, const std::string & only_scene,
  bool oracle_injection, const std::string & out)
{
  const RunConfig cfg = resolve_config(flags);
  const Vocabulary vocab = load_vocab(vocab_file);
  const SceneCorpus corpus = load_scenes(scenes_dir, cfg.jobs);
  const ScorerModel model = load_model_file(model_file);
  std::vector<io::NamedTrajectory> external;
  if (!external_file.empty()) {
    external = io::trajectories_from_jsonl(io::read_file(external_file));
    if (external.empty()) {
      throw std::runtime_error("external trajectory file " + external_file + " is empty");
    }
  }
  std::map<std::string, Trajectory> by_id;
  for (const auto & e : external) by_id[e.id] = e.traj;

  std::vector<const Scene *> scenes;
  for (const auto & s : corpus.scenes) {
    if (only_scene.empty() || s.id == only_scene) scenes.push_back(&s);
  }
  if (scenes.empty()) {
    throw std::runtime_error("no scene matches '" + only_scene + "'");
  }
  SelectOptions options;
  options.weights = cfg.training.final_weights;
  options.oracle_injection = oracle_injection;
  std::vector<std::string> lines(scenes.size());
  parallel_for(scenes.size(), cfg.jobs, [&](std::size_t i) {
    const Scene & scene = *scenes[i];
    const Trajectory * ext = nullptr;
    if (const auto it = by_id.find(scene.id); it != by_id.end()) {
      ext = &it->second;
    } else if (external.size() == 1) {
      ext = &external.front().traj;
    }
    lines[i] = selection_json(scene.id, select(scene, model, vocab, ext, options)).dump();
  });
  std::string text;
  for (const auto & l : lines) text += l + "\n";
  io::write_file_atomic(fs::path(out) / "selection.jsonl", text);
  std::cout << text;
  return 0;
}

void add_common(CLI::App * app, CommonFlags & flags)
{
  app->add_option("--config", flags.config_file, "JSON run configuration")->check(CLI::ExistingFile);
  app->add_option("--seed", flags.seed, "Run seed");
  app->add_option("--jobs", flags.jobs, "Maximum worker threads")->check(CLI::Range(std::size_t{1}, kMaxJobs));
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"vocabplan: vocabulary-based trajectory planning and metric-guided selection"};
  app.require_subcommand(1);
  CommonFlags flags;

  std::optional<std::size_t> count;
  std::string out;
  auto * scenes = app.add_subcommand("scenes", "Scene corpus commands")->require_subcommand(1);
  auto * generate = scenes->add_subcommand("generate", "Generate synthetic scenes");
  add_common(generate, flags);
  generate->add_option("--count", count, "Number of scenes");
  generate->add_option("--out", out, "Output directory")->required();

  std::string experts_dir;
  std::optional<std::size_t> m;
  bool all_scenes = false;
  auto * vocab = app.add_subcommand("vocab", "Vocabulary commands")->require_subcommand(1);
  auto * build = vocab->add_subcommand("build", "Cluster expert trajectories into a vocabulary");
  add_common(build, flags);
  build->add_option("--experts", experts_dir, "Scene directory")->required();
  build->add_option("--m", m, "Vocabulary size");
  build->add_flag("--all-scenes", all_scenes, "Include held-out scenes");
  build->add_option("--out", out, "Vocabulary file")->required();

  std::string scenes_dir;
  std::string vocab_file;
  std::optional<std::size_t> adversarial;
  auto * labels = app.add_subcommand("labels", "Label commands")->require_subcommand(1);
  auto * compute = labels->add_subcommand("compute", "Oracle labels for every scene and candidate");
  add_common(compute, flags);
  compute->add_option("--scenes", scenes_dir, "Scene directory")->required();
  compute->add_option("--vocab", vocab_file, "Vocabulary file")->required();
  compute->add_option("--adversarial", adversarial, "Adversarial candidates per scene");
  compute->add_option("--out", out, "Label directory")->required();

  std::string labels_dir;
  TrainFlags tf;
  auto * train_cmd = app.add_subcommand("train", "Train planner and scorer jointly");
  add_common(train_cmd, flags);
  train_cmd->add_option("--scenes", scenes_dir, "Scene directory")->required();
  train_cmd->add_option("--vocab", vocab_file, "Vocabulary file")->required();
  train_cmd->add_option("--labels", labels_dir, "Label directory")->required();
  train_cmd->add_option("--epochs", tf.epochs, "Epochs");
  train_cmd->add_option("--lr", tf.lr, "Initial learning rate");
  train_cmd->add_option("--batch-size", tf.batch_size, "Scenes per optimizer step");
  train_cmd->add_option("--width", tf.width, "Embedding width d");
  train_cmd->add_option("--out", out, "Run directory")->required();

  std::string model_file;
  std::string split = "heldout";
  bool oracle_injection = false;
  auto * evaluate = app.add_subcommand("evaluate", "Evaluate a trained scorer against the oracle");
  add_common(evaluate, flags);
  evaluate->add_option("--scenes", scenes_dir, "Scene directory")->required();
  evaluate->add_option("--vocab", vocab_file, "Vocabulary file")->required();
  evaluate->add_option("--labels", labels_dir, "Label directory")->required();
  evaluate->add_option("--model", model_file, "Model file")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--split", split, "heldout, train or all")->check(CLI::IsMember({"heldout", "train", "all"}));
  evaluate->add_flag("--oracle-injection", oracle_injection, "Replace predictions with oracle labels");
  evaluate->add_option("--out", out, "Report directory")->required();

  std::string external_file;
  std::string only_scene;
  auto * select_cmd = app.add_subcommand("select", "Select a trajectory per scene");
  add_common(select_cmd, flags);
  select_cmd->add_option("--scenes", scenes_dir, "Scene directory")->required();
  select_cmd->add_option("--vocab", vocab_file, "Vocabulary file")->required();
  select_cmd->add_option("--model", model_file, "Model file")->required()->check(CLI::ExistingFile);
  select_cmd->add_option("--external", external_file, "External trajectories (JSONL)")->check(CLI::ExistingFile);
  select_cmd->add_option("--scene", only_scene, "Only this scene id");
  select_cmd->add_flag("--oracle-injection", oracle_injection, "Rank with oracle metrics");
  select_cmd->add_option("--out", out, "Report directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) return cmd_scenes_generate(flags, count, out);
    if (build->parsed()) return cmd_vocab_build(flags, experts_dir, m, all_scenes, out);
    if (compute->parsed()) return cmd_labels_compute(flags, scenes_dir, vocab_file, adversarial, out);
    if (train_cmd->parsed()) return cmd_train(flags, tf, scenes_dir, vocab_file, labels_dir, out);
    if (evaluate->parsed()) {
      return cmd_evaluate(flags, scenes_dir, vocab_file, labels_dir, model_file, split, oracle_injection, out);
    }
    if (select_cmd->parsed()) {
      return cmd_select(flags, scenes_dir, vocab_file, model_file, external_file, only_scene, oracle_injection, out);
    }
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
