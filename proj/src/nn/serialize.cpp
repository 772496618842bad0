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

#include "vocabplan/nn/serialize.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

namespace vocabplan::nn
{

namespace
{

constexpr const char * kMagic = "vocabplan-params";

void put_le(std::ostream & out, double v)
{
  const auto bits = std::bit_cast<std::uint64_t>(v);
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
  out.write(bytes, 8);
}

double get_le(std::istream & in)
{
  unsigned char bytes[8];
  in.read(reinterpret_cast<char *>(bytes), 8);
  if (!in) {
    throw std::runtime_error("parameter file truncated");
  }
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

void write_parameters(std::ostream & out, const ParameterList & params, const nlohmann::json & meta)
{
  nlohmann::json header;
  header["version"] = kParameterFormatVersion;
  header["meta"] = meta;
  header["params"] = nlohmann::json::array();
  for (const auto & [name, t] : params) {
    header["params"].push_back({{"name", name}, {"shape", t.shape()}});
  }
  out << kMagic << '\n' << header.dump() << '\n';
  for (const auto & [name, t] : params) {
    for (double v : t.values()) put_le(out, v);
  }
  if (!out) {
    throw std::runtime_error("failed to write parameter file");
  }
}

LoadedParameters read_parameters(std::istream & in)
{
  std::string magic;
  std::getline(in, magic);
  if (magic != kMagic) {
    throw std::runtime_error("not a vocabplan parameter file");
  }
  std::string header_line;
  std::getline(in, header_line);
  const auto header = nlohmann::json::parse(header_line);
  if (header.at("version").get<int>() != kParameterFormatVersion) {
    throw std::runtime_error(
      "unsupported parameter format version " + std::to_string(header.at("version").get<int>()));
  }
  LoadedParameters loaded;
  loaded.meta = header.value("meta", nlohmann::json::object());
  for (const auto & entry : header.at("params")) {
    Shape shape = entry.at("shape").get<Shape>();
    std::vector<double> values(shape_size(shape));
    for (auto & v : values) v = get_le(in);
    loaded.params.emplace_back(
      entry.at("name").get<std::string>(), Tensor::from_values(std::move(shape), std::move(values), true));
  }
  return loaded;
}

void assign_parameters(const ParameterList & source, ParameterList & target)
{
  std::map<std::string, const Tensor *> by_name;
  for (const auto & [name, t] : source) by_name[name] = &t;
  if (by_name.size() != target.size()) {
    throw std::runtime_error("parameter manifest does not match the model layout");
  }
  for (auto & [name, t] : target) {
    const auto it = by_name.find(name);
    if (it == by_name.end()) {
      throw std::runtime_error("parameter file lacks " + name);
    }
    if (it->second->shape() != t.shape()) {
      throw std::runtime_error(
        "parameter " + name + " has shape " + shape_string(it->second->shape()) + ", expected " +
        shape_string(t.shape()));
    }
    const auto src = it->second->values();
    auto dst = t.mutable_values();
    std::copy(src.begin(), src.end(), dst.begin());
  }
}

}  // namespace vocabplan::nn
