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

// Shared helpers for the unit tests and the acceptance runner.

#include <random>
#include <vector>

#include "csisense/ops.hpp"
#include "csisense/random.hpp"
#include "csisense/tensor.hpp"

namespace csisense::testing {

template <typename T>
Tensor<T> random_tensor(Shape shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Tensor<T> x(std::move(shape));
  std::uniform_real_distribution<double> u(lo, hi);
  for (auto& v : x.data()) v = static_cast<T>(u(rng));
  return x;
}

/// sum(y * r) for a fixed random r, so every output element gets a distinct
/// upstream gradient.
inline Tensor<double> weighted_sum(Graph<double>& g, const Tensor<double>& y, const Tensor<double>& r) {
  return sum(g, mul(g, y, r));
}

}  // namespace csisense::testing
