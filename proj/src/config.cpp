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

#include "vocabplan/config.hpp"

#include "vocabplan/io.hpp"

#include <cmath>
#include <limits>
#include <set>

namespace vocabplan
{

using nlohmann::json;

namespace
{

class Reader
{
public:
  Reader(const json & j, std::string path) : j_(j), path_(std::move(path))
  {
    if (!j_.is_object()) {
      throw ConfigError("config key '" + display() + "' must be an object");
    }
  }

  void read(const char * key, double & out)
  {
    if (const json * v = take(key)) {
      if (!v->is_number()) fail(key, "must be a number");
      out = v->get<double>();
    }
  }

  void read(const char * key, std::size_t & out)
  {
    if (const json * v = take(key)) {
      if (!v->is_number_unsigned()) fail(key, "must be a non-negative integer");
      out = v->get<std::size_t>();
    }
  }

  void read_seed(const char * key, std::uint64_t & out)
  {
    if (const json * v = take(key)) {
      if (!v->is_number_unsigned()) fail(key, "must be a non-negative integer");
      out = v->get<std::uint64_t>();
    }
  }

  void read(const char * key, int & out)
  {
    if (const json * v = take(key)) {
      if (!v->is_number_integer()) fail(key, "must be an integer");
      out = v->get<int>();
    }
  }

  void read(const char * key, std::string & out)
  {
    if (const json * v = take(key)) {
      if (!v->is_string()) fail(key, "must be a string");
      out = v->get<std::string>();
    }
  }

  void read(const char * key, std::vector<RoadFamily> & out)
  {
    if (const json * v = take(key)) {
      if (!v->is_array()) fail(key, "must be a list of road family names");
      std::vector<RoadFamily> families;
      for (const auto & f : *v) {
        if (!f.is_string()) fail(key, "must be a list of road family names");
        try {
          families.push_back(road_family_from_string(f.get<std::string>()));
        } catch (const std::invalid_argument &) {
          fail(key, "unknown road family '" + f.get<std::string>() + "'");
        }
      }
      out = std::move(families);
    }
  }

  template <typename F>
  void section(const char * key, F && f)
  {
    if (const json * v = take(key)) {
      Reader child(*v, qualified(key));
      f(child);
      child.finish();
    }
  }

  void finish() const
  {
    for (const auto & [key, value] : j_.items()) {
      if (!seen_.count(key)) {
        throw ConfigError("unknown config key '" + qualified(key.c_str()) + "'");
      }
    }
  }

private:
  const json * take(const char * key)
  {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  [[noreturn]] void fail(const char * key, const std::string & what) const
  {
    throw ConfigError("config key '" + qualified(key) + "' " + what);
  }

  std::string qualified(const char * key) const { return path_.empty() ? key : path_ + "." + key; }
  std::string display() const { return path_.empty() ? "<root>" : path_; }

  const json & j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const char * key, const std::string & what)
{
  if (!ok) {
    throw ConfigError("config key '" + std::string(key) + "' " + what);
  }
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }
bool finite_pos(double v) { return std::isfinite(v) && v > 0.0; }

json families_to_json(const std::vector<RoadFamily> & families)
{
  json out = json::array();
  for (auto f : families) out.push_back(to_string(f));
  return out;
}

}  // namespace

bool RunConfig::operator==(const RunConfig & other) const
{
  return run_config_to_json(*this) == run_config_to_json(other);
}

void validate_run_config(const RunConfig & c)
{
  require(c.jobs >= 1 && c.jobs <= kMaxJobs, "jobs", "must be in [1, " + std::to_string(kMaxJobs) + "]");
  require(!c.paths.corpus_dir.empty(), "paths.corpus_dir", "must not be empty");
  require(!c.paths.vocab_file.empty(), "paths.vocab_file", "must not be empty");
  require(!c.paths.labels_dir.empty(), "paths.labels_dir", "must not be empty");
  require(!c.paths.model_file.empty(), "paths.model_file", "must not be empty");
  require(!c.paths.report_dir.empty(), "paths.report_dir", "must not be empty");

  const auto & s = c.scenes;
  require(s.min_agents <= s.max_agents, "scenes.min_agents", "must not exceed scenes.max_agents");
  require(s.max_agents <= 64, "scenes.max_agents", "must be at most 64");
  require(!s.families.empty(), "scenes.families", "must not be empty");
  require(finite_nonneg(s.min_ego_speed), "scenes.min_ego_speed", "must be >= 0");
  require(std::isfinite(s.max_ego_speed) && s.max_ego_speed >= s.min_ego_speed && s.max_ego_speed <= 30.0,
          "scenes.max_ego_speed", "must be in [scenes.min_ego_speed, 30]");
  for (auto [key, p] : {std::pair{"scenes.traffic_light_probability", s.traffic_light_probability},
                        std::pair{"scenes.red_light_probability", s.red_light_probability},
                        std::pair{"scenes.parked_fraction", s.parked_fraction}}) {
    require(p >= 0.0 && p <= 1.0, key, "must be a probability in [0, 1]");
  }
  require(std::isfinite(s.min_drivable_width) && s.min_drivable_width >= 4.0, "scenes.min_drivable_width",
          "must be >= 4");
  require(std::isfinite(s.max_drivable_width) && s.max_drivable_width >= s.min_drivable_width &&
            s.max_drivable_width <= 20.0,
          "scenes.max_drivable_width", "must be in [scenes.min_drivable_width, 20]");
  require(s.max_retries >= 1, "scenes.max_retries", "must be >= 1");
  require(s.grid.cells_x >= 2 && s.grid.cells_y >= 2 && s.grid.cells_x <= 4096 && s.grid.cells_y <= 4096,
          "scenes.grid", "cell counts must be in [2, 4096]");
  require(finite_pos(s.grid.extent_x) && finite_pos(s.grid.extent_y), "scenes.grid", "extents must be positive");
  require(c.heldout_every >= 2, "heldout_every", "must be >= 2");

  require(c.vocab_size >= 1 && c.vocab_size <= kMaxVocabularySize, "vocabulary.size",
          "must be in [1, " + std::to_string(kMaxVocabularySize) + "]");
  require(c.kmeans_restarts >= 1, "vocabulary.restarts", "must be >= 1");
  require(c.kmeans_max_iters >= 1, "vocabulary.max_iters", "must be >= 1");

  require(c.adversarial_count <= 1024, "adversarial.count", "must be at most 1024");
  require(finite_nonneg(c.adversarial.max_lateral_offset), "adversarial.max_lateral_offset", "must be >= 0");
  require(finite_pos(c.adversarial.min_speed_scale), "adversarial.min_speed_scale", "must be > 0");
  require(std::isfinite(c.adversarial.max_speed_scale) && c.adversarial.max_speed_scale >= c.adversarial.min_speed_scale,
          "adversarial.max_speed_scale", "must be >= adversarial.min_speed_scale");
  require(finite_nonneg(c.adversarial.heading_noise), "adversarial.heading_noise", "must be >= 0");

  require(c.width >= 1 && c.width <= kMaxPlannerWidth, "model.width",
          "must be in [1, " + std::to_string(kMaxPlannerWidth) + "]");

  const auto & t = c.training;
  require(t.epochs >= 1 && t.epochs <= 10000, "training.epochs", "must be in [1, 10000]");
  require(t.batch_size >= 1, "training.batch_size", "must be >= 1");
  require(std::isfinite(t.learning_rate) && t.learning_rate >= 0.0 && t.learning_rate <= 1.0,
          "training.learning_rate", "must be in [0, 1]");
  require(std::isfinite(t.weight_decay) && t.weight_decay >= 0.0 && t.weight_decay < 1.0, "training.weight_decay",
          "must be in [0, 1)");
  require(finite_nonneg(t.imitation_weight), "training.imitation_weight", "must be >= 0");
  require(finite_nonneg(t.scorer_weight), "training.scorer_weight", "must be >= 0");
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    const std::string key = std::string("training.metric_loss_weights.") + metric_key(kAllMetrics[i]);
    require(finite_nonneg(t.metric_weights.w[i]), key.c_str(), "must be >= 0");
  }
  const auto & w = t.final_weights;
  for (auto [key, v] : {std::pair{"final_score_weights.nc", w.nc}, std::pair{"final_score_weights.dac", w.dac},
                        std::pair{"final_score_weights.ep", w.ep}, std::pair{"final_score_weights.ttc", w.ttc},
                        std::pair{"final_score_weights.lk", w.lk}, std::pair{"final_score_weights.ddc", w.ddc}}) {
    require(finite_nonneg(v), key, "must be >= 0");
  }

  const auto & o = c.oracle;
  require(finite_nonneg(o.at_fault_min_speed), "oracle.at_fault_min_speed", "must be >= 0");
  require(finite_pos(o.ttc_horizon) && o.ttc_horizon <= 10.0, "oracle.ttc_horizon", "must be in (0, 10]");
  require(finite_pos(o.ttc_substep) && o.ttc_substep <= o.ttc_horizon, "oracle.ttc_substep",
          "must be in (0, oracle.ttc_horizon]");
  require(finite_nonneg(o.lk_max_offset), "oracle.lk_max_offset", "must be >= 0");
  require(o.lk_min_steps >= 1 && o.lk_min_steps <= kHorizonSteps, "oracle.lk_min_steps", "must be in [1, 8]");
  require(std::isfinite(o.hc_min_lon_accel) && o.hc_min_lon_accel < 0.0, "oracle.hc_min_lon_accel", "must be < 0");
  require(finite_pos(o.hc_max_lon_accel), "oracle.hc_max_lon_accel", "must be > 0");
  require(finite_pos(o.hc_max_lat_accel), "oracle.hc_max_lat_accel", "must be > 0");
  require(finite_pos(o.hc_max_jerk), "oracle.hc_max_jerk", "must be > 0");
  require(finite_nonneg(o.ddc_full_credit), "oracle.ddc_full_credit", "must be >= 0");
  require(std::isfinite(o.ddc_half_credit) && o.ddc_half_credit >= o.ddc_full_credit, "oracle.ddc_half_credit",
          "must be >= oracle.ddc_full_credit");
}

json run_config_to_json(const RunConfig & c)
{
  const auto & s = c.scenes;
  const auto & t = c.training;
  const auto & w = t.final_weights;
  const auto & o = c.oracle;
  json metric_weights = json::object();
  for (std::size_t i = 0; i < kMetricCount; ++i) metric_weights[metric_key(kAllMetrics[i])] = t.metric_weights.w[i];
  return {
    {"seed", c.seed},
    {"jobs", c.jobs},
    {"paths", {{"corpus_dir", c.paths.corpus_dir}, {"vocab_file", c.paths.vocab_file},
               {"labels_dir", c.paths.labels_dir}, {"model_file", c.paths.model_file},
               {"report_dir", c.paths.report_dir}}},
    {"scenes", {{"count", c.scene_count}, {"heldout_every", c.heldout_every},
                {"min_agents", s.min_agents}, {"max_agents", s.max_agents},
                {"families", families_to_json(s.families)},
                {"min_ego_speed", s.min_ego_speed}, {"max_ego_speed", s.max_ego_speed},
                {"traffic_light_probability", s.traffic_light_probability},
                {"red_light_probability", s.red_light_probability},
                {"min_drivable_width", s.min_drivable_width}, {"max_drivable_width", s.max_drivable_width},
                {"parked_fraction", s.parked_fraction}, {"max_retries", s.max_retries},
                {"grid", {{"cells_x", s.grid.cells_x}, {"cells_y", s.grid.cells_y},
                          {"extent_x", s.grid.extent_x}, {"extent_y", s.grid.extent_y}}}}},
    {"vocabulary", {{"size", c.vocab_size}, {"restarts", c.kmeans_restarts}, {"max_iters", c.kmeans_max_iters}}},
    {"adversarial", {{"count", c.adversarial_count}, {"max_lateral_offset", c.adversarial.max_lateral_offset},
                     {"min_speed_scale", c.adversarial.min_speed_scale},
                     {"max_speed_scale", c.adversarial.max_speed_scale},
                     {"heading_noise", c.adversarial.heading_noise}}},
    {"model", {{"width", c.width}}},
    {"training", {{"epochs", t.epochs}, {"batch_size", t.batch_size}, {"learning_rate", t.learning_rate},
                  {"weight_decay", t.weight_decay}, {"imitation_weight", t.imitation_weight},
                  {"scorer_weight", t.scorer_weight}, {"metric_loss_weights", metric_weights}}},
    {"final_score_weights", {{"nc", w.nc}, {"dac", w.dac}, {"ep", w.ep}, {"ttc", w.ttc}, {"lk", w.lk}, {"ddc", w.ddc}}},
    {"oracle", {{"at_fault_min_speed", o.at_fault_min_speed}, {"ttc_horizon", o.ttc_horizon},
                {"ttc_substep", o.ttc_substep}, {"lk_max_offset", o.lk_max_offset},
                {"lk_min_steps", o.lk_min_steps}, {"hc_min_lon_accel", o.hc_min_lon_accel},
                {"hc_max_lon_accel", o.hc_max_lon_accel}, {"hc_max_lat_accel", o.hc_max_lat_accel},
                {"hc_max_jerk", o.hc_max_jerk}, {"ddc_full_credit", o.ddc_full_credit},
                {"ddc_half_credit", o.ddc_half_credit}}},
  };
}

RunConfig run_config_from_json(const json & j, const RunConfig & base)
{
  RunConfig c = base;
  Reader root(j, "");
  root.read_seed("seed", c.seed);
  root.read("jobs", c.jobs);
  root.section("paths", [&](Reader & r) {
    r.read("corpus_dir", c.paths.corpus_dir);
    r.read("vocab_file", c.paths.vocab_file);
    r.read("labels_dir", c.paths.labels_dir);
    r.read("model_file", c.paths.model_file);
    r.read("report_dir", c.paths.report_dir);
  });
  root.section("scenes", [&](Reader & r) {
    auto & s = c.scenes;
    r.read("count", c.scene_count);
    r.read("heldout_every", c.heldout_every);
    r.read("min_agents", s.min_agents);
    r.read("max_agents", s.max_agents);
    r.read("families", s.families);
    r.read("min_ego_speed", s.min_ego_speed);
    r.read("max_ego_speed", s.max_ego_speed);
    r.read("traffic_light_probability", s.traffic_light_probability);
    r.read("red_light_probability", s.red_light_probability);
    r.read("min_drivable_width", s.min_drivable_width);
    r.read("max_drivable_width", s.max_drivable_width);
    r.read("parked_fraction", s.parked_fraction);
    r.read("max_retries", s.max_retries);
    r.section("grid", [&](Reader & g) {
      g.read("cells_x", s.grid.cells_x);
      g.read("cells_y", s.grid.cells_y);
      g.read("extent_x", s.grid.extent_x);
      g.read("extent_y", s.grid.extent_y);
    });
  });
  root.section("vocabulary", [&](Reader & r) {
    r.read("size", c.vocab_size);
    r.read("restarts", c.kmeans_restarts);
    r.read("max_iters", c.kmeans_max_iters);
  });
  root.section("adversarial", [&](Reader & r) {
    r.read("count", c.adversarial_count);
    r.read("max_lateral_offset", c.adversarial.max_lateral_offset);
    r.read("min_speed_scale", c.adversarial.min_speed_scale);
    r.read("max_speed_scale", c.adversarial.max_speed_scale);
    r.read("heading_noise", c.adversarial.heading_noise);
  });
  root.section("model", [&](Reader & r) { r.read("width", c.width); });
  root.section("training", [&](Reader & r) {
    auto & t = c.training;
    r.read("epochs", t.epochs);
    r.read("batch_size", t.batch_size);
    r.read("learning_rate", t.learning_rate);
    r.read("weight_decay", t.weight_decay);
    r.read("imitation_weight", t.imitation_weight);
    r.read("scorer_weight", t.scorer_weight);
    r.section("metric_loss_weights", [&](Reader & m) {
      for (std::size_t i = 0; i < kMetricCount; ++i) m.read(metric_key(kAllMetrics[i]), t.metric_weights.w[i]);
    });
  });
  root.section("final_score_weights", [&](Reader & r) {
    auto & w = c.training.final_weights;
    r.read("nc", w.nc);
    r.read("dac", w.dac);
    r.read("ep", w.ep);
    r.read("ttc", w.ttc);
    r.read("lk", w.lk);
    r.read("ddc", w.ddc);
  });
  root.section("oracle", [&](Reader & r) {
    auto & o = c.oracle;
    r.read("at_fault_min_speed", o.at_fault_min_speed);
    r.read("ttc_horizon", o.ttc_horizon);
    r.read("ttc_substep", o.ttc_substep);
    r.read("lk_max_offset", o.lk_max_offset);
    r.read("lk_min_steps", o.lk_min_steps);
    r.read("hc_min_lon_accel", o.hc_min_lon_accel);
    r.read("hc_max_lon_accel", o.hc_max_lon_accel);
    r.read("hc_max_lat_accel", o.hc_max_lat_accel);
    r.read("hc_max_jerk", o.hc_max_jerk);
    r.read("ddc_full_credit", o.ddc_full_credit);
    r.read("ddc_half_credit", o.ddc_half_credit);
  });
  root.finish();
  validate_run_config(c);
  return c;
}

RunConfig load_run_config(const std::string & path)
{
  json j;
  try {
    j = json::parse(io::read_file(path));
  } catch (const json::parse_error & e) {
    throw ConfigError("config file " + path + ": " + e.what());
  }
  return run_config_from_json(j);
}

SceneConfig effective_scene_config(const RunConfig & config)
{
  SceneConfig s = config.scenes;
  s.seed = config.seed;
  return s;
}

TrainConfig effective_train_config(const RunConfig & config)
{
  TrainConfig t = config.training;
  t.seed = config.seed;
  return t;
}

std::string config_hash(const json & j) { return io::hex64(io::fnv1a64(j.dump())); }

}  // namespace vocabplan
