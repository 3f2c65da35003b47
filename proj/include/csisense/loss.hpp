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

// Training objectives. Each returns a [1] tensor and is one fused graph node
// with a hand-derived backward; internal arithmetic runs in double.

#include <span>

#include "csisense/tensor.hpp"

namespace csisense {

/// Normalized-temperature cross-entropy over 2N projections [2N, P] where
/// rows 2i and 2i+1 are a positive pair. Mean over all 2N anchors. Throws on
/// an odd row count, a zero-norm row or temperature <= 0.
template <typename T>
Tensor<T> nt_xent(Graph<T>& g, const Tensor<T>& projections, double temperature);

/// Mean of -log softmax(logits)[label] over the batch; labels index columns.
template <typename T>
Tensor<T> cross_entropy(Graph<T>& g, const Tensor<T>& logits, std::span<const int> labels);

/// Mean of -(1 - p_t)^gamma log p_t. gamma = 0 is cross-entropy.
template <typename T>
Tensor<T> focal_loss(Graph<T>& g, const Tensor<T>& logits, std::span<const int> labels,
                     double gamma = 2.0);

/// Binary cross-entropy with source labeled 1 and target 0, from raw logits:
/// mean softplus(-src) + mean softplus(tgt).
template <typename T>
Tensor<T> adda_discriminator_loss(Graph<T>& g, const Tensor<T>& src_logits,
                                  const Tensor<T>& tgt_logits);

/// Label-flipped generator objective: mean softplus(-tgt) = -mean log sigmoid(tgt).
template <typename T>
Tensor<T> adda_generator_loss(Graph<T>& g, const Tensor<T>& tgt_logits);

/// log(1 + e^x) without overflow.
double softplus(double x);

}  // namespace csisense
