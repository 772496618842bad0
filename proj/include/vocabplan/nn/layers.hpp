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

#ifndef VOCABPLAN__NN__LAYERS_HPP_
#define VOCABPLAN__NN__LAYERS_HPP_

#include "vocabplan/core/random.hpp"
#include "vocabplan/nn/ops.hpp"
#include "vocabplan/nn/tensor.hpp"

#include <string>
#include <utility>
#include <vector>

namespace vocabplan::nn
{

/// Ordered (name, tensor) list; the order fixes serialization and optimizer layout.
using ParameterList = std::vector<std::pair<std::string, Tensor>>;

struct Linear
{
  Tensor weight;  // [in x out]
  Tensor bias;    // [1 x out]

  static Linear uniform_init(std::size_t in, std::size_t out, Rng & rng);
  static Linear zeros(std::size_t in, std::size_t out);

  std::size_t in_features() const { return weight.dim(0); }
  std::size_t out_features() const { return weight.dim(1); }

  /// x [n x in] -> [n x out].
  Tensor forward(const Tensor & x) const;

  void collect(const std::string & prefix, ParameterList & out) const;
};

/// Linear layers with ReLU between them; the last layer is linear.
struct Mlp
{
  std::vector<Linear> layers;

  static Mlp uniform_init(const std::vector<std::size_t> & widths, Rng & rng);

  std::size_t in_features() const { return layers.front().in_features(); }
  std::size_t out_features() const { return layers.back().out_features(); }

  Tensor forward(const Tensor & x) const;

  void collect(const std::string & prefix, ParameterList & out) const;
};

inline Tensor mlp_forward(const Mlp & params, const Tensor & input) { return params.forward(input); }

/// Deep copy with fresh leaves (no shared storage or gradients).
Tensor clone_leaf(const Tensor & t);
Linear clone(const Linear & l);
Mlp clone(const Mlp & m);

}  // namespace vocabplan::nn

#endif  // VOCABPLAN__NN__LAYERS_HPP_
