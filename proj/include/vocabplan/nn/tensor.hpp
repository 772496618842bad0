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

#ifndef VOCABPLAN__NN__TENSOR_HPP_
#define VOCABPLAN__NN__TENSOR_HPP_

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace vocabplan::nn
{

using Shape = std::vector<std::size_t>;

std::size_t shape_size(const Shape & shape);
std::string shape_string(const Shape & shape);

namespace detail
{

struct Node
{
  Shape shape;
  std::vector<double> value;
  std::vector<double> grad;
  bool requires_grad{false};
  bool leaf{true};
  bool consumed{false};
  const char * op{"leaf"};
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node &)> backward;

  void ensure_grad()
  {
    if (grad.size() != value.size()) {
      grad.assign(value.size(), 0.0);
    }
  }
};

}  // namespace detail

/// Dense row-major float64 array with reverse-mode autodiff.
///
/// Copies share the underlying node. Operations on tensors that require
/// gradients record a graph; `backward()` on a scalar result accumulates
/// d(result)/d(leaf) into every participating leaf and then releases the
/// recorded graph, so a second call on the same result is an error.
class Tensor
{
public:
  Tensor();

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, double value, bool requires_grad = false);
  static Tensor from_values(Shape shape, std::vector<double> values, bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);

  const Shape & shape() const;
  std::size_t rank() const { return shape().size(); }
  std::size_t dim(std::size_t axis) const;
  std::size_t size() const;

  std::span<const double> values() const;
  /// Writable storage; only permitted on leaves.
  std::span<double> mutable_values();
  double item() const;
  double operator[](std::size_t i) const { return values()[i]; }

  bool requires_grad() const;
  Tensor & set_requires_grad(bool flag);
  bool is_leaf() const;

  /// Accumulated gradient; all zeros when none has been accumulated.
  std::vector<double> grad() const;
  bool has_grad() const;
  void zero_grad();

  void backward() const;

  /// Same values, no graph, no gradient tracking.
  Tensor detach() const;

  detail::Node & node() const { return *node_; }
  std::shared_ptr<detail::Node> node_ptr() const { return node_; }
  bool same_node(const Tensor & other) const { return node_ == other.node_; }

  /// Builds an operation result; checks finiteness and records the graph when
  /// any parent requires gradients.
  static Tensor make_result(
    const char * op, Shape shape, std::vector<double> values, std::vector<Tensor> parents,
    std::function<void(detail::Node &)> backward);

private:
  explicit Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}

  std::shared_ptr<detail::Node> node_;
};

}  // namespace vocabplan::nn

#endif  // VOCABPLAN__NN__TENSOR_HPP_
