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

#ifndef VOCABPLAN__NN__OPS_HPP_
#define VOCABPLAN__NN__OPS_HPP_

#include "vocabplan/nn/tensor.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace vocabplan::nn
{

// Shape conventions: matrices are rank-2 [rows x cols]; row vectors may be
// given as [cols] or [1 x cols].

Tensor matmul(const Tensor & a, const Tensor & b);
Tensor transpose(const Tensor & a);
Tensor reshape(const Tensor & a, Shape shape);

Tensor add(const Tensor & a, const Tensor & b);
Tensor sub(const Tensor & a, const Tensor & b);
Tensor mul(const Tensor & a, const Tensor & b);
Tensor scale(const Tensor & a, double factor);
/// a [n x m] + row vector b [m] broadcast over rows.
Tensor add_rowwise(const Tensor & a, const Tensor & b);

Tensor relu(const Tensor & a);
Tensor sigmoid(const Tensor & a);
Tensor softmax_rows(const Tensor & a);
/// Per-row standardization (x - mean) / sqrt(var + eps), without affine parameters.
Tensor layer_norm_rows(const Tensor & a, double eps = 1e-5);

Tensor sum(const Tensor & a);
Tensor mean(const Tensor & a);

Tensor gather_rows(const Tensor & a, std::span<const std::size_t> rows);
Tensor concat_rows(const std::vector<Tensor> & parts);
/// Stacks `times` copies of a [n x m] into [times*n x m].
Tensor tile_rows(const Tensor & a, std::size_t times);

/// Elementwise clamp of a [n x m] with per-column bounds; zero gradient where clamped.
Tensor clamp_columns(const Tensor & a, std::span<const double> lower, std::span<const double> upper);

/// Continuous grid coordinate (u along W, v along H), cell centers at +0.5.
struct SamplePoint
{
  double u{0.0};
  double v{0.0};
};

/// Bilinear interpolation of grid [C x H x W] at each point -> [P x C].
///
/// Coordinates are clamped to [0.5, dim - 0.5] before interpolation, so
/// samples beyond the border repeat the border cells. Differentiable with
/// respect to the grid values.
Tensor bilinear_sample(const Tensor & grid, std::span<const SamplePoint> points);

/// softmax(q k^T / sqrt(d)) v; zero rows when k has no rows.
Tensor attention(const Tensor & query, const Tensor & key, const Tensor & value);

/// out[c] = sum_t weights[c, t] * tokens[c * T + t] for weights [C x T], tokens [C*T x d].
Tensor grouped_weighted_sum(const Tensor & weights, const Tensor & tokens);

// Losses return scalars [1]; targets are constants.

/// Sum of binary cross-entropy between sigmoid(logits) and targets in [0, 1].
Tensor bce_with_logits_sum(const Tensor & logits, std::span<const double> targets);
/// Sum of categorical cross-entropy of softmax(logits [n x k]) against class indices.
Tensor cross_entropy_sum(const Tensor & logits, std::span<const std::size_t> classes);
/// Sum of squared differences.
Tensor squared_error_sum(const Tensor & pred, std::span<const double> targets);
/// Mean smooth-L1 (transition at |d| = 1) of pred - targets.
Tensor smooth_l1_mean(const Tensor & pred, std::span<const double> targets);

}  // namespace vocabplan::nn

#endif  // VOCABPLAN__NN__OPS_HPP_
