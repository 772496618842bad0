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

#ifndef VOCABPLAN__NN__OPTIM_HPP_
#define VOCABPLAN__NN__OPTIM_HPP_

#include "vocabplan/nn/tensor.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace vocabplan::nn
{

struct AdamWConfig
{
  double learning_rate{1e-4};
  double beta1{0.9};
  double beta2{0.999};
  double epsilon{1e-8};
  double weight_decay{0.01};
  // Steps over which the cosine schedule decays to zero.
  std::size_t horizon{1};
};

/// base * 0.5 * (1 + cos(pi * step / horizon)), with step clamped to the horizon.
double cosine_learning_rate(double base, std::size_t step, std::size_t horizon);

/// One decoupled-weight-decay Adam update in place. `t` is the 1-based step used
/// for bias correction; `lr` the already-scheduled rate.
void adamw_update(
  std::span<double> param, std::span<const double> grad, std::span<double> first_moment,
  std::span<double> second_moment, std::size_t t, double lr, const AdamWConfig & config);

class AdamW
{
public:
  AdamW(AdamWConfig config, std::vector<Tensor> params);

  /// Applies one update from the parameters' accumulated gradients.
  void step();
  void zero_grad();

  std::size_t steps_taken() const { return steps_; }
  /// Rate used by the next call to step().
  double current_learning_rate() const;
  const AdamWConfig & config() const { return config_; }
  const std::vector<std::vector<double>> & first_moments() const { return m_; }
  const std::vector<std::vector<double>> & second_moments() const { return v_; }

private:
  AdamWConfig config_;
  std::vector<Tensor> params_;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
  std::size_t steps_{0};
};

}  // namespace vocabplan::nn

#endif  // VOCABPLAN__NN__OPTIM_HPP_
