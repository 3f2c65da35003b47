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

#include <cstdint>
#include <functional>
#include <vector>

#include "csisense/tensor.hpp"

namespace csisense {

/// Scalar objective evaluated on a fresh graph; it closes over its inputs.
using Objective = std::function<Tensor<double>(Graph<double>&)>;

struct GradCheckOptions {
  double eps = 1e-5;
  /// Elements probed per tensor; 0 probes every element.
  std::size_t max_elements = 0;
  std::uint64_t seed = 1;
};

/// Compares reverse-mode gradients of `objective` with central differences
/// for every tensor in `wrt`. Returns the maximum over probed elements of
/// |analytic - numeric| / max(1, |numeric|).
///
/// Each tensor in `wrt` is switched to requires_grad for the duration of the
/// call; its values are restored bit-exactly afterwards.
double grad_check(const Objective& objective, std::vector<Tensor<double>> wrt,
                  const GradCheckOptions& opts = {});

/// Single-input form: f maps x to a scalar.
double grad_check(const std::function<Tensor<double>(Graph<double>&, const Tensor<double>&)>& f,
                  Tensor<double> x, double eps = 1e-5);

}  // namespace csisense
