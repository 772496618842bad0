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

#ifndef VOCABPLAN__NN__SERIALIZE_HPP_
#define VOCABPLAN__NN__SERIALIZE_HPP_

#include "vocabplan/nn/layers.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <string>

namespace vocabplan::nn
{

inline constexpr int kParameterFormatVersion = 1;

/// Flat parameter file:
///   line 1  "vocabplan-params"
///   line 2  JSON header {"version", "meta", "params": [{"name", "shape"}...]}
///   then    row-major float64 little-endian values, parameters in header order.
void write_parameters(std::ostream & out, const ParameterList & params, const nlohmann::json & meta);

struct LoadedParameters
{
  nlohmann::json meta;
  ParameterList params;
};

LoadedParameters read_parameters(std::istream & in);

/// Copies values from `source` into the identically named and shaped tensors of `target`.
void assign_parameters(const ParameterList & source, ParameterList & target);

}  // namespace vocabplan::nn

#endif  // VOCABPLAN__NN__SERIALIZE_HPP_
