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

#include "vocabplan/nn/tensor.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>
#include <utility>

namespace vocabplan::nn
{

std::size_t shape_size(const Shape & shape)
{
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

std::string shape_string(const Shape & shape)
{
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

Tensor::Tensor() : node_(std::make_shared<detail::Node>())
{
  node_->shape = {0};
}

Tensor Tensor::zeros(Shape shape, bool requires_grad)
{
  return full(std::move(shape), 0.0, requires_grad);
}

Tensor Tensor::full(Shape shape, double value, bool requires_grad)
{
  const std::size_t n = shape_size(shape);
  return from_values(std::move(shape), std::vector<double>(n, value), requires_grad);
}

Tensor Tensor::from_values(Shape shape, std::vector<double> values, bool requires_grad)
{
  if (shape_size(shape) != values.size()) {
    throw std::invalid_argument(
      "tensor shape " + shape_string(shape) + " does not match " + std::to_string(values.size()) +
      " values");
  }
  auto node = std::make_shared<detail::Node>();
  node->shape = std::move(shape);
  node->value = std::move(values);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

Tensor Tensor::scalar(double value, bool requires_grad)
{
  return from_values({1}, {value}, requires_grad);
}

const Shape & Tensor::shape() const { return node_->shape; }

std::size_t Tensor::dim(std::size_t axis) const
{
  if (axis >= node_->shape.size()) {
    throw std::out_of_range("tensor axis out of range");
  }
  return node_->shape[axis];
}

std::size_t Tensor::size() const { return node_->value.size(); }

std::span<const double> Tensor::values() const { return node_->value; }

std::span<double> Tensor::mutable_values()
{
  if (!node_->leaf) {
    throw std::logic_error("mutable_values: only leaf tensors are writable");
  }
  return node_->value;
}

double Tensor::item() const
{
  if (size() != 1) {
    throw std::invalid_argument("item: tensor is not a scalar " + shape_string(shape()));
  }
  return node_->value[0];
}

bool Tensor::requires_grad() const { return node_->requires_grad; }

Tensor & Tensor::set_requires_grad(bool flag)
{
  if (!node_->leaf) {
    throw std::logic_error("set_requires_grad: only leaf tensors can change tracking");
  }
  node_->requires_grad = flag;
  return *this;
}

bool Tensor::is_leaf() const { return node_->leaf; }

std::vector<double> Tensor::grad() const
{
  if (node_->grad.size() != node_->value.size()) {
    return std::vector<double>(node_->value.size(), 0.0);
  }
  return node_->grad;
}

bool Tensor::has_grad() const { return node_->grad.size() == node_->value.size(); }

void Tensor::zero_grad() { node_->grad.assign(node_->value.size(), 0.0); }

Tensor Tensor::detach() const { return from_values(shape(), node_->value, false); }

Tensor Tensor::make_result(
  const char * op, Shape shape, std::vector<double> values, std::vector<Tensor> parents,
  std::function<void(detail::Node &)> backward)
{
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::domain_error(std::string("non-finite value produced by ") + op);
    }
  }
  auto node = std::make_shared<detail::Node>();
  node->shape = std::move(shape);
  node->value = std::move(values);
  node->op = op;
  node->leaf = false;
  bool track = false;
  for (const auto & p : parents) {
    if (p.node_->consumed) {
      throw std::logic_error(std::string(op) + ": input belongs to a consumed graph");
    }
    track = track || p.node_->requires_grad;
  }
  if (track) {
    node->requires_grad = true;
    node->parents.reserve(parents.size());
    for (auto & p : parents) node->parents.push_back(p.node_);
    node->backward = std::move(backward);
  }
  return Tensor(std::move(node));
}

void Tensor::backward() const
{
  if (node_->consumed) {
    throw std::logic_error("backward: graph already consumed");
  }
  if (!node_->requires_grad) {
    throw std::logic_error("backward: value is detached from any parameter");
  }
  if (node_->value.size() != 1) {
    throw std::invalid_argument("backward: loss must be a scalar, got " + shape_string(shape()));
  }

  // Iterative post-order DFS gives a topological order (parents first).
  std::vector<detail::Node *> order;
  std::unordered_set<detail::Node *> visited;
  std::vector<std::pair<detail::Node *, std::size_t>> stack;
  stack.emplace_back(node_.get(), 0);
  visited.insert(node_.get());
  while (!stack.empty()) {
    auto & [n, next] = stack.back();
    if (next < n->parents.size()) {
      detail::Node * p = n->parents[next++].get();
      if (p->requires_grad && visited.insert(p).second) {
        stack.emplace_back(p, 0);
      }
    } else {
      order.push_back(n);
      stack.pop_back();
    }
  }

  for (auto * n : order) {
    if (!n->leaf) {
      n->grad.assign(n->value.size(), 0.0);
    } else {
      n->ensure_grad();
    }
  }
  node_->grad[0] += 1.0;

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    detail::Node * n = *it;
    if (!n->leaf && n->backward) {
      for (auto & p : n->parents) {
        if (p->requires_grad) p->ensure_grad();
      }
      n->backward(*n);
    }
  }

  for (auto * n : order) {
    if (!n->leaf) {
      n->parents.clear();
      n->backward = nullptr;
      n->consumed = true;
    }
  }
}

}  // namespace vocabplan::nn
