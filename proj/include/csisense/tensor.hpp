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

#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace csisense {

using Shape = std::vector<std::size_t>;

std::size_t shape_numel(const Shape& shape);
std::string shape_str(const Shape& shape);

/// Raised for any operand shape that an operator cannot accept.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense row-major array with an optional gradient buffer.
///
/// A Tensor is a shared handle: copies alias the same storage. Operators
/// never mutate their inputs; only gradient accumulation and optimizer
/// updates write into an existing tensor.
template <typename T>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, bool requires_grad = false);
  Tensor(Shape shape, std::vector<T> values, bool requires_grad = false);

  static Tensor scalar(T value, bool requires_grad = false) {
    return Tensor(Shape{1}, std::vector<T>{value}, requires_grad);
  }

  bool defined() const { return static_cast<bool>(storage_); }
  const Shape& shape() const { return storage_->shape; }
  std::size_t dim(std::size_t i) const { return storage_->shape.at(i); }
  std::size_t rank() const { return storage_->shape.size(); }
  std::size_t numel() const { return storage_->values.size(); }

  std::span<T> data() { return storage_->values; }
  std::span<const T> data() const { return storage_->values; }
  std::vector<T> to_vector() const { return storage_->values; }

  bool requires_grad() const { return storage_ && storage_->requires_grad; }
  /// Enables or disables gradient tracking; the grad buffer is (re)zeroed.
  void set_requires_grad(bool on);
  /// Gradient accumulation buffer. Writable through const handles: backward
  /// closures hold const copies of their inputs.
  std::span<T> grad() const;
  void zero_grad();

  T item() const;
  Tensor clone() const;

  /// Same storage identity (not value equality).
  bool same(const Tensor& other) const { return storage_ == other.storage_; }

 private:
  struct Storage {
    Shape shape;
    std::vector<T> values;
    std::vector<T> grad;
    bool requires_grad = false;
  };
  std::shared_ptr<Storage> storage_;
};

/// Reverse-mode tape. Operators append one backward closure per executed
/// op; backward() replays them in exact reverse order.
template <typename T>
class Graph {
 public:
  explicit Graph(bool recording = true) : recording_(recording) {}
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  bool recording() const { return recording_; }
  std::size_t size() const { return tape_.size(); }

  /// True when an op with these inputs must be recorded.
  bool tracks(std::initializer_list<const Tensor<T>*> inputs) const;
  void record(std::function<void()> backward_fn);

  /// Seeds d(loss)/d(loss) = 1 and replays the tape. The tape is released
  /// afterwards; calling again before a new op is recorded throws.
  void backward(const Tensor<T>& loss);

 private:
  std::vector<std::function<void()>> tape_;
  bool recording_;
  bool consumed_ = false;
};

extern template class Tensor<float>;
extern template class Tensor<double>;
extern template class Graph<float>;
extern template class Graph<double>;

}  // namespace csisense
