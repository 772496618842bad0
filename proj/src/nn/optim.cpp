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

#include "vocabplan/nn/optim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vocabplan::nn
{

double cosine_learning_rate(double base, std::size_t step, std::size_t horizon)
{
  if (horizon == 0) {
    return base;
  }
  const double s = static_cast<double>(std::min(step, horizon));
  return base * 0.5 * (1.0 + std::cos(3.14159265358979323846 * s / static_cast<double>(horizon)));
}

void adamw_update(
  std::span<double> param, std::span<const double> grad, std::span<double> first_moment,
  std::span<double> second_moment, std::size_t t, double lr, const AdamWConfig & config)
{
  if (grad.size() != param.size() || first_moment.size() != param.size() ||
      second_moment.size() != param.size()) {
    throw std::invalid_argument("adamw_update: parameter, gradient and moment sizes differ");
  }
  if (t == 0) {
    throw std::invalid_argument("adamw_update: step index is 1-based");
  }
  const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(t));
  const double decay = 1.0 - lr * config.weight_decay;
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double g = grad[i];
    first_moment[i] = config.beta1 * first_moment[i] + (1.0 - config.beta1) * g;
    second_moment[i] = config.beta2 * second_moment[i] + (1.0 - config.beta2) * g * g;
    const double m_hat = first_moment[i] / bc1;
    const double v_hat = second_moment[i] / bc2;
    param[i] = param[i] * decay - lr * m_hat / (std::sqrt(v_hat) + config.epsilon);
  }
}

AdamW::AdamW(AdamWConfig config, std::vector<Tensor> params)
: config_(config), params_(std::move(params))
{
  for (const auto & p : params_) {
    if (!p.is_leaf()) {
      throw std::invalid_argument("AdamW: parameters must be leaf tensors");
    }
    m_.emplace_back(p.size(), 0.0);
    v_.emplace_back(p.size(), 0.0);
  }
}

double AdamW::current_learning_rate() const
{
  return cosine_learning_rate(config_.learning_rate, steps_, config_.horizon);
}

void AdamW::step()
{
  const double lr = current_learning_rate();
  for (std::size_t i = 0; i < params_.size(); ++i) {
    Tensor & p = params_[i];
    const std::vector<double> g = p.grad();
    adamw_update(p.mutable_values(), g, m_[i], v_[i], steps_ + 1, lr, config_);
  }
  ++steps_;
}

void AdamW::zero_grad()
{
  for (auto & p : params_) p.zero_grad();
}

}  // namespace vocabplan::nn
