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

#include "vocabplan/nn/layers.hpp"

#include <cmath>
#include <stdexcept>

namespace vocabplan::nn
{

Linear Linear::uniform_init(std::size_t in, std::size_t out, Rng & rng)
{
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  std::vector<double> w(in * out);
  for (auto & v : w) v = rng.uniform(-bound, bound);
  std::vector<double> b(out);
  for (auto & v : b) v = rng.uniform(-bound, bound);
  return {Tensor::from_values({in, out}, std::move(w), true),
          Tensor::from_values({1, out}, std::move(b), true)};
}

Linear Linear::zeros(std::size_t in, std::size_t out)
{
  return {Tensor::zeros({in, out}, true), Tensor::zeros({1, out}, true)};
}

Tensor Linear::forward(const Tensor & x) const
{
  if (x.rank() != 2 || x.dim(1) != in_features()) {
    throw std::invalid_argument(
      "linear: input " + shape_string(x.shape()) + " does not match weight " +
      shape_string(weight.shape()));
  }
  return add_rowwise(matmul(x, weight), bias);
}

void Linear::collect(const std::string & prefix, ParameterList & out) const
{
  out.emplace_back(prefix + "weight", weight);
  out.emplace_back(prefix + "bias", bias);
}

Mlp Mlp::uniform_init(const std::vector<std::size_t> & widths, Rng & rng)
{
  if (widths.size() < 2) {
    throw std::invalid_argument("mlp: need at least input and output widths");
  }
  Mlp m;
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
    m.layers.push_back(Linear::uniform_init(widths[i], widths[i + 1], rng));
  }
  return m;
}

Tensor Mlp::forward(const Tensor & x) const
{
  if (layers.empty()) {
    throw std::logic_error("mlp: no layers");
  }
  Tensor h = x;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    h = layers[i].forward(h);
    if (i + 1 < layers.size()) {
      h = relu(h);
    }
  }
  return h;
}

void Mlp::collect(const std::string & prefix, ParameterList & out) const
{
  for (std::size_t i = 0; i < layers.size(); ++i) {
    layers[i].collect(prefix + "layer" + std::to_string(i) + "/", out);
  }
}

Tensor clone_leaf(const Tensor & t)
{
  return Tensor::from_values(t.shape(), {t.values().begin(), t.values().end()}, t.requires_grad());
}

Linear clone(const Linear & l) { return {clone_leaf(l.weight), clone_leaf(l.bias)}; }

Mlp clone(const Mlp & m)
{
  Mlp out;
  for (const auto & l : m.layers) out.layers.push_back(clone(l));
  return out;
}

}  // namespace vocabplan::nn
