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

// Raw compute kernels behind conv1d and linear.
//
// kernels::     OpenMP-parallel versions used by the engine. Work is split
//               over independent output rows only, so results do not depend
//               on the thread count.
// kernels::serial::  straightforward loop nests kept as the reference the
//               parallel versions are tested and benchmarked against.
//
// All buffers are row-major. Backward kernels accumulate (+=) into their
// outputs.

#include <cstddef>
#include <span>

namespace csisense::kernels {

struct Conv1dDims {
  std::size_t batch = 1;
  std::size_t in_channels = 1;
  std::size_t out_channels = 1;
  std::size_t in_len = 1;
  std::size_t kernel = 1;
  std::size_t stride = 1;
  std::size_t padding = 0;

  std::size_t out_len() const { return (in_len + 2 * padding - kernel) / stride + 1; }
};

struct LinearDims {
  std::size_t batch = 1;
  std::size_t in_features = 1;
  std::size_t out_features = 1;
};

template <typename T>
void conv1d_forward(const Conv1dDims& d, std::span<const T> x, std::span<const T> w,
                    std::span<const T> bias, std::span<T> y);
template <typename T>
void conv1d_backward_input(const Conv1dDims& d, std::span<const T> dy, std::span<const T> w,
                           std::span<T> dx);
template <typename T>
void conv1d_backward_params(const Conv1dDims& d, std::span<const T> dy, std::span<const T> x,
                            std::span<T> dw, std::span<T> dbias);

template <typename T>
void linear_forward(const LinearDims& d, std::span<const T> x, std::span<const T> w,
                    std::span<const T> bias, std::span<T> y);
template <typename T>
void linear_backward_input(const LinearDims& d, std::span<const T> dy, std::span<const T> w,
                           std::span<T> dx);
template <typename T>
void linear_backward_params(const LinearDims& d, std::span<const T> dy, std::span<const T> x,
                            std::span<T> dw, std::span<T> dbias);

namespace serial {

template <typename T>
void conv1d_forward(const Conv1dDims& d, std::span<const T> x, std::span<const T> w,
                    std::span<const T> bias, std::span<T> y);
template <typename T>
void conv1d_backward_input(const Conv1dDims& d, std::span<const T> dy, std::span<const T> w,
                           std::span<T> dx);
template <typename T>
void conv1d_backward_params(const Conv1dDims& d, std::span<const T> dy, std::span<const T> x,
                            std::span<T> dw, std::span<T> dbias);

template <typename T>
void linear_forward(const LinearDims& d, std::span<const T> x, std::span<const T> w,
                    std::span<const T> bias, std::span<T> y);
template <typename T>
void linear_backward_input(const LinearDims& d, std::span<const T> dy, std::span<const T> w,
                           std::span<T> dx);
template <typename T>
void linear_backward_params(const LinearDims& d, std::span<const T> dy, std::span<const T> x,
                            std::span<T> dw, std::span<T> dbias);

}  // namespace serial
}  // namespace csisense::kernels
