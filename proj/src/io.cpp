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

#include "vocabplan/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace vocabplan::io
{

namespace fs = std::filesystem;

namespace
{

constexpr const char * kVocabularyKind = "vocabplan-vocabulary";

const json & field(const json & j, const char * key)
{
  if (!j.is_object()) {
    throw FormatError(std::string("expected an object holding '") + key + "'");
  }
  const auto it = j.find(key);
  if (it == j.end()) {
    throw FormatError(std::string("missing field '") + key + "'");
  }
  return *it;
}

double number(const json & j, const char * key)
{
  const json & v = field(j, key);
  if (!v.is_number()) {
    throw FormatError(std::string("field '") + key + "' must be a number");
  }
  return v.get<double>();
}

json vec2_to_json(const Vec2 & p) { return json::array({p.x, p.y}); }

Vec2 vec2_from_json(const json & j)
{
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw FormatError("expected a point [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json polyline_to_json(const std::vector<Vec2> & pts)
{
  json out = json::array();
  for (const auto & p : pts) out.push_back(vec2_to_json(p));
  return out;
}

std::vector<Vec2> polyline_from_json(const json & j)
{
  if (!j.is_array()) {
    throw FormatError("expected a list of points");
  }
  std::vector<Vec2> pts;
  pts.reserve(j.size());
  for (const auto & p : j) pts.push_back(vec2_from_json(p));
  return pts;
}

json parse_line(std::string_view line, std::size_t number)
{
  try {
    return json::parse(line);
  } catch (const json::parse_error & e) {
    throw FormatError("line " + std::to_string(number) + ": " + e.what());
  }
}

template <typename F>
void for_each_line(std::string_view text, F && f)
{
  std::size_t number = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    const std::string_view line = text.substr(start, end - start);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
      f(parse_line(line, number), number);
    }
    start = end + 1;
  }
}

}  // namespace

std::uint64_t fnv1a64(std::string_view data)
{
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value)
{
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

void write_file_atomic(const fs::path & path, std::string_view content)
{
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) {
      throw std::runtime_error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot write " + tmp.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::string read_file(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json mask_to_rle(const DrivableMask & mask)
{
  json rows = json::array();
  for (int v = 0; v < mask.cells_y(); ++v) {
    json runs = json::array();
    bool current = false;
    int run = 0;
    for (int u = 0; u < mask.cells_x(); ++u) {
      if (mask.at(u, v) == current) {
        ++run;
        continue;
      }
      runs.push_back(run);
      current = !current;
      run = 1;
    }
    runs.push_back(run);
    rows.push_back(std::move(runs));
  }
  return {{"cells_x", mask.cells_x()}, {"cells_y", mask.cells_y()}, {"rows", std::move(rows)}};
}

DrivableMask mask_from_rle(const json & j)
{
  const int cx = field(j, "cells_x").get<int>();
  const int cy = field(j, "cells_y").get<int>();
  const json & rows = field(j, "rows");
  if (cx <= 0 || cy <= 0 || !rows.is_array() || rows.size() != static_cast<std::size_t>(cy)) {
    throw FormatError("mask: row count does not match cells_y");
  }
  DrivableMask mask(cx, cy);
  for (int v = 0; v < cy; ++v) {
    const json & runs = rows[static_cast<std::size_t>(v)];
    if (!runs.is_array()) {
      throw FormatError("mask: row " + std::to_string(v) + " is not a list");
    }
    int u = 0;
    bool value = false;
    for (const auto & r : runs) {
      if (!r.is_number_integer() || r.get<long long>() < 0) {
        throw FormatError("mask: run lengths must be non-negative integers");
      }
      const auto len = r.get<long long>();
      if (u + len > cx) {
        throw FormatError("mask: row " + std::to_string(v) + " overflows cells_x");
      }
      for (long long k = 0; k < len; ++k) mask.set(u++, v, value);
      value = !value;
    }
    if (u != cx) {
      throw FormatError("mask: row " + std::to_string(v) + " does not cover cells_x");
    }
  }
  return mask;
}

json trajectory_to_json(const Trajectory & traj)
{
  json wps = json::array();
  for (const auto & w : traj.waypoints) wps.push_back(json::array({w.x, w.y, w.theta}));
  return {{"dt", Trajectory::dt}, {"waypoints", std::move(wps)}};
}

Trajectory trajectory_from_json(const json & j)
{
  if (j.contains("dt") && number(j, "dt") != Trajectory::dt) {
    throw FormatError("trajectory: dt must be " + std::to_string(Trajectory::dt));
  }
  const json & wps = field(j, "waypoints");
  if (!wps.is_array() || wps.size() != kHorizonSteps) {
    throw FormatError("trajectory: expected " + std::to_string(kHorizonSteps) + " waypoints");
  }
  Trajectory t;
  for (std::size_t k = 0; k < kHorizonSteps; ++k) {
    const json & w = wps[k];
    if (!w.is_array() || w.size() != 3 || !w[0].is_number() || !w[1].is_number() || !w[2].is_number()) {
      throw FormatError("trajectory: waypoint " + std::to_string(k) + " must be [x, y, theta]");
    }
    t.waypoints[k] = {w[0].get<double>(), w[1].get<double>(), w[2].get<double>()};
  }
  try {
    validate_trajectory(t);
  } catch (const std::invalid_argument & e) {
    throw FormatError(std::string("trajectory: ") + e.what());
  }
  return t;
}

json scene_to_json(const Scene & s)
{
  json lanes = json::array();
  for (const auto & l : s.lanes) lanes.push_back({{"direction", l.direction}, {"points", polyline_to_json(l.points)}});
  json agents = json::array();
  for (const auto & a : s.agents) {
    agents.push_back({{"x", a.x}, {"y", a.y}, {"w", a.w}, {"h", a.h}, {"theta", a.theta}, {"vx", a.vx}, {"vy", a.vy}});
  }
  json lights = json::array();
  for (const auto & l : s.traffic_lights) {
    lights.push_back({{"stop_a", vec2_to_json(l.stop_a)}, {"stop_b", vec2_to_json(l.stop_b)},
                      {"state", l.state == LightState::red ? "red" : "green"}});
  }
  return {
    {"id", s.id},
    {"family", to_string(s.family)},
    {"grid", {{"cells_x", s.grid.cells_x}, {"cells_y", s.grid.cells_y}, {"extent_x", s.grid.extent_x}, {"extent_y", s.grid.extent_y}}},
    {"drivable", mask_to_rle(s.drivable)},
    {"lanes", std::move(lanes)},
    {"route", {{"points", polyline_to_json(s.route.points)}, {"reference_progress", s.route.reference_progress}}},
    {"agents", std::move(agents)},
    {"traffic_lights", std::move(lights)},
    {"ego", {{"velocity", vec2_to_json(s.ego.velocity)}, {"acceleration", vec2_to_json(s.ego.acceleration)},
             {"length", s.ego.length}, {"width", s.ego.width}}},
    {"expert", trajectory_to_json(s.expert)},
  };
}

Scene scene_from_json(const json & j)
{
  Scene s;
  try {
    s.id = field(j, "id").get<std::string>();
    s.family = road_family_from_string(field(j, "family").get<std::string>());
    const json & g = field(j, "grid");
    s.grid.cells_x = field(g, "cells_x").get<int>();
    s.grid.cells_y = field(g, "cells_y").get<int>();
    s.grid.extent_x = number(g, "extent_x");
    s.grid.extent_y = number(g, "extent_y");
    s.drivable = mask_from_rle(field(j, "drivable"));
    for (const auto & l : field(j, "lanes")) {
      s.lanes.push_back({polyline_from_json(field(l, "points")), field(l, "direction").get<int>()});
    }
    const json & r = field(j, "route");
    s.route.points = polyline_from_json(field(r, "points"));
    s.route.reference_progress = number(r, "reference_progress");
    for (const auto & a : field(j, "agents")) {
      s.agents.push_back({number(a, "x"), number(a, "y"), number(a, "w"), number(a, "h"), number(a, "theta"),
                          number(a, "vx"), number(a, "vy")});
    }
    for (const auto & l : field(j, "traffic_lights")) {
      const std::string state = field(l, "state").get<std::string>();
      if (state != "red" && state != "green") {
        throw FormatError("traffic light state must be red or green, got '" + state + "'");
      }
      s.traffic_lights.push_back({vec2_from_json(field(l, "stop_a")), vec2_from_json(field(l, "stop_b")),
                                  state == "red" ? LightState::red : LightState::green});
    }
    const json & e = field(j, "ego");
    s.ego.velocity = vec2_from_json(field(e, "velocity"));
    s.ego.acceleration = vec2_from_json(field(e, "acceleration"));
    s.ego.length = number(e, "length");
    s.ego.width = number(e, "width");
    s.expert = trajectory_from_json(field(j, "expert"));
    validate_scene(s);
  } catch (const FormatError &) {
    throw;
  } catch (const std::exception & ex) {
    throw FormatError(std::string("scene: ") + ex.what());
  }
  return s;
}

std::string dump_document(const json & j) { return j.dump(1) + "\n"; }

std::string trajectories_to_jsonl(const std::vector<NamedTrajectory> & records)
{
  std::string out;
  for (const auto & r : records) {
    json j = trajectory_to_json(r.traj);
    j["id"] = r.id;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<NamedTrajectory> trajectories_from_jsonl(std::string_view text)
{
  std::vector<NamedTrajectory> out;
  for_each_line(text, [&](const json & j, std::size_t line) {
    try {
      out.push_back({field(j, "id").get<std::string>(), trajectory_from_json(j)});
    } catch (const std::exception & e) {
      throw FormatError("line " + std::to_string(line) + ": " + e.what());
    }
  });
  return out;
}

std::string vocab_entry_id(std::size_t index)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "v%04zu", index);
  return buf;
}

std::string adversarial_id(std::size_t index)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "a%03zu", index);
  return buf;
}

json vocabulary_to_json(const Vocabulary & vocab)
{
  json entries = json::array();
  for (std::size_t i = 0; i < vocab.entries.size(); ++i) {
    json e = trajectory_to_json(vocab.entries[i]);
    e["id"] = vocab_entry_id(i);
    entries.push_back(std::move(e));
  }
  const auto & m = vocab.meta;
  return {
    {"kind", kVocabularyKind},
    {"size", vocab.entries.size()},
    {"build_meta", {{"iterations", m.iterations}, {"inertia", m.inertia}, {"seed", m.seed},
                    {"restarts", m.restarts}, {"max_iters", m.max_iters}, {"corpus_size", m.corpus_size}}},
    {"entries", std::move(entries)},
  };
}

Vocabulary vocabulary_from_json(const json & j)
{
  if (!j.is_object() || j.value("kind", "") != kVocabularyKind) {
    throw FormatError("not a vocabulary file");
  }
  Vocabulary v;
  const json & m = field(j, "build_meta");
  v.meta.iterations = field(m, "iterations").get<std::size_t>();
  v.meta.inertia = number(m, "inertia");
  v.meta.seed = field(m, "seed").get<std::uint64_t>();
  v.meta.restarts = field(m, "restarts").get<std::size_t>();
  v.meta.max_iters = field(m, "max_iters").get<std::size_t>();
  v.meta.corpus_size = field(m, "corpus_size").get<std::size_t>();
  for (const auto & e : field(j, "entries")) v.entries.push_back(trajectory_from_json(e));
  if (v.entries.size() != field(j, "size").get<std::size_t>()) {
    throw FormatError("vocabulary: entry count does not match size");
  }
  return v;
}

json metrics_to_json(const MetricVector & m)
{
  json j = json::object();
  for (MetricId id : kAllMetrics) j[metric_key(id)] = m.get(id);
  return j;
}

MetricVector metrics_from_json(const json & j)
{
  MetricVector m;
  for (MetricId id : kAllMetrics) m.set(id, number(j, metric_key(id)));
  if (j.size() != kMetricCount) {
    throw FormatError("metrics: unexpected keys");
  }
  try {
    validate_metric_vector(m);
  } catch (const std::invalid_argument & e) {
    throw FormatError(std::string("metrics: ") + e.what());
  }
  return m;
}

std::string labels_to_jsonl(const std::vector<LabelRecord> & records)
{
  std::string out;
  for (const auto & r : records) {
    json j = {{"candidate_id", r.candidate_id}, {"metrics", metrics_to_json(r.metrics)}, {"final_score", r.final_score}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<LabelRecord> labels_from_jsonl(std::string_view text)
{
  std::vector<LabelRecord> out;
  for_each_line(text, [&](const json & j, std::size_t line) {
    try {
      out.push_back({field(j, "candidate_id").get<std::string>(), metrics_from_json(field(j, "metrics")),
                     number(j, "final_score")});
    } catch (const std::exception & e) {
      throw FormatError("line " + std::to_string(line) + ": " + e.what());
    }
  });
  return out;
}

}  // namespace vocabplan::io
