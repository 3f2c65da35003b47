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

// Differentiable operators. Every op takes the Graph it records into; an
// op is recorded only when the graph is recording and at least one input
// requires a gradient. Feature maps are channels-first: [batch, channels, time].

#include <cstddef>

#include "csisense/tensor.hpp"

namespace csisense {

enum class Mode { kTrain, kEval };

enum class Activation { kRelu, kSigmoid };

/// Running statistics owned by a batch-norm layer.
template <typename T>
struct BatchNormStats {
  Tensor<T> mean;
  Tensor<T> var;
  double momentum = 0.1;
  double eps = 1e-5;

  explicit BatchNormStats(std::size_t channels = 1);
};

template <typename T>
Tensor<T> conv1d(Graph<T>& g, const Tensor<T>& x, const Tensor<T>& kernel, const Tensor<T>& bias,
                 std::size_t stride, std::size_t padding);

/// In kTrain mode normalizes with batch statistics over batch x time and,
/// when update_running is set, folds them into `stats` (unbiased variance).
/// kEval normalizes with the running statistics.
template <typename T>
Tensor<T> batchnorm1d(Graph<T>& g, const Tensor<T>& x, const Tensor<T>& gamma,
                      const Tensor<T>& beta, BatchNormStats<T>& stats, Mode mode,
                      bool update_running = true);

template <typename T>
Tensor<T> activation(Graph<T>& g, const Tensor<T>& x, Activation kind);
template <typename T>
Tensor<T> relu(Graph<T>& g, const Tensor<T>& x) { return activation(g, x, Activation::kRelu); }
template <typename T>
Tensor<T> sigmoid(Graph<T>& g, const Tensor<T>& x) { return activation(g, x, Activation::kSigmoid); }

/// Padding positions behave as -inf. Ties route the gradient to the first maximum.
template <typename T>
Tensor<T> maxpool1d(Graph<T>& g, const Tensor<T>& x, std::size_t kernel, std::size_t stride,
                    std::size_t padding);

/// [B, C, L] -> [B, C]
template <typename T>
Tensor<T> global_avg_pool1d(Graph<T>& g, const Tensor<T>& x);

/// [B, Din] x [Dout, Din] + [Dout] -> [B, Dout]
template <typename T>
Tensor<T> linear(Graph<T>& g, const Tensor<T>& x, const Tensor<T>& weight, const Tensor<T>& bias);

/// Row-wise softmax of a [B, K] tensor.
template <typename T>
Tensor<T> softmax(Graph<T>& g, const Tensor<T>& x);

// Elementwise helpers used by residual sums and test objectives.
template <typename T>
Tensor<T> add(Graph<T>& g, const Tensor<T>& a, const Tensor<T>& b);
template <typename T>
Tensor<T> scale(Graph<T>& g, const Tensor<T>& a, T factor);
template <typename T>
Tensor<T> mul(Graph<T>& g, const Tensor<T>& a, const Tensor<T>& b);
/// Sum of all elements, shape [1].
template <typename T>
Tensor<T> sum(Graph<T>& g, const Tensor<T>& a);

/// out[b, c, t] = x[b, c, t] * s[b, c]
template <typename T>
Tensor<T> channel_scale(Graph<T>& g, const Tensor<T>& x, const Tensor<T>& s);

/// Output length of a conv/pool window: floor((L + 2p - k) / s) + 1.
std::size_t window_out_len(std::size_t len, std::size_t kernel, std::size_t stride,
                           std::size_t padding);

}  // namespace csisense
