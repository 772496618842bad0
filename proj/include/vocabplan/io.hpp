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

#ifndef VOCABPLAN__IO_HPP_
#define VOCABPLAN__IO_HPP_

#include "vocabplan/core/types.hpp"
#include "vocabplan/oracle.hpp"
#include "vocabplan/vocabulary.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vocabplan::io
{

using nlohmann::json;

/// Malformed or inconsistent file content.
class FormatError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t value);

/// Writes to a sibling temporary file and renames it over `path`. Creates parent directories.
/// Throws std::runtime_error when the file cannot be written.
void write_file_atomic(const std::filesystem::path & path, std::string_view content);
std::string read_file(const std::filesystem::path & path);

/// Rows of alternating run lengths, each row starting with a (possibly empty) run of zeros.
json mask_to_rle(const DrivableMask & mask);
DrivableMask mask_from_rle(const json & j);

json trajectory_to_json(const Trajectory & traj);
Trajectory trajectory_from_json(const json & j);

json scene_to_json(const Scene & scene);
Scene scene_from_json(const json & j);

/// Pretty-printed document with a trailing newline.
std::string dump_document(const json & j);

struct NamedTrajectory
{
  std::string id;
  Trajectory traj;
};

/// One `{id, dt, waypoints}` record per line.
std::string trajectories_to_jsonl(const std::vector<NamedTrajectory> & records);
std::vector<NamedTrajectory> trajectories_from_jsonl(std::string_view text);

/// Vocabulary identifiers "v0000", ... and adversarial identifiers "a000", ....
std::string vocab_entry_id(std::size_t index);
std::string adversarial_id(std::size_t index);

json vocabulary_to_json(const Vocabulary & vocab);
Vocabulary vocabulary_from_json(const json & j);

json metrics_to_json(const MetricVector & m);
MetricVector metrics_from_json(const json & j);

struct LabelRecord
{
  std::string candidate_id;
  MetricVector metrics;
  double final_score{0.0};
};

std::string labels_to_jsonl(const std::vector<LabelRecord> & records);
std::vector<LabelRecord> labels_from_jsonl(std::string_view text);

}  // namespace vocabplan::io

#endif  // VOCABPLAN__IO_HPP_
