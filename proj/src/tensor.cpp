/*
 * Copyright (c) 2026, The csisense Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "csisense/tensor.hpp"

#include <algorithm>
#include <sstream>

namespace csisense {

std::size_t shape_numel(const Shape& shape) {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

std::string shape_str(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << 'x';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

namespace {
void check_shape(const Shape& shape) {
  if (shape.empty()) throw ShapeError("tensor shape must have at least one dimension");
  for (auto d : shape) {
    if (d == 0) throw ShapeError("tensor dimensions must be positive, got " + shape_str(shape));
  }
}
}  // namespace

template <typename T>
Tensor<T>::Tensor(Shape shape, bool requires_grad) : storage_(std::make_shared<Storage>()) {
  check_shape(shape);
  storage_->values.assign(shape_numel(shape), T{0});
  storage_->shape = std::move(shape);
  set_requires_grad(requires_grad);
}

template <typename T>
Tensor<T>::Tensor(Shape shape, std::vector<T> values, bool requires_grad)
    : storage_(std::make_shared<Storage>()) {
  check_shape(shape);
  if (shape_numel(shape) != values.size()) {
    throw ShapeError("shape " + shape_str(shape) + " does not hold " +
                     std::to_string(values.size()) + " values");
  }
  storage_->shape = std::move(shape);
  storage_->values = std::move(values);
  set_requires_grad(requires_grad);
}

template <typename T>
void Tensor<T>::set_requires_grad(bool on) {
  storage_->requires_grad = on;
  if (on) {
    storage_->grad.assign(storage_->values.size(), T{0});
  } else {
    storage_->grad.clear();
    storage_->grad.shrink_to_fit();
  }
}

template <typename T>
std::span<T> Tensor<T>::grad() const {
  if (!requires_grad()) throw std::logic_error("tensor does not track gradients");
  return storage_->grad;
}

template <typename T>
void Tensor<T>::zero_grad() {
  if (requires_grad()) std::fill(storage_->grad.begin(), storage_->grad.end(), T{0});
}

template <typename T>
T Tensor<T>::item() const {
  if (numel() != 1) throw ShapeError("item() on tensor of shape " + shape_str(shape()));
  return storage_->values[0];
}

template <typename T>
Tensor<T> Tensor<T>::clone() const {
  return Tensor(storage_->shape, storage_->values, storage_->requires_grad);
}

template <typename T>
bool Graph<T>::tracks(std::initializer_list<const Tensor<T>*> inputs) const {
  if (!recording_) return false;
  return std::any_of(inputs.begin(), inputs.end(),
                     [](const Tensor<T>* t) { return t && t->defined() && t->requires_grad(); });
}

template <typename T>
void Graph<T>::record(std::function<void()> backward_fn) {
  consumed_ = false;
  tape_.push_back(std::move(backward_fn));
}

template <typename T>
void Graph<T>::backward(const Tensor<T>& loss) {
  if (consumed_) throw std::logic_error("backward() called twice without a new forward pass");
  if (!loss.defined() || loss.numel() != 1) {
    throw ShapeError("backward() needs a scalar loss");
  }
  if (!loss.requires_grad()) {
    throw std::logic_error("loss was not produced by tracked operations");
  }
  loss.grad()[0] += T{1};
  for (auto it = tape_.rbegin(); it != tape_.rend(); ++it) (*it)();
  tape_.clear();
  consumed_ = true;
}

template class Tensor<float>;
template class Tensor<double>;
template class Graph<float>;
template class Graph<double>;

}  // namespace csisense
