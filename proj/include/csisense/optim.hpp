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
#include <string>
#include <vector>

#include "csisense/model.hpp"
#include "csisense/tensor.hpp"

namespace csisense {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Parameters sharing one learning rate.
template <typename T>
struct ParamGroup {
  std::string name;
  double lr = 1e-3;
  std::vector<NamedParam<T>> params;
};

/// Bias-corrected Adam over named parameter groups. A parameter is stepped
/// when the mask (if any) marks it trainable; entries the mask freezes are
/// skipped even if they carry a gradient.
template <typename T>
class Adam {
 public:
  Adam(std::vector<ParamGroup<T>> groups, AdamConfig cfg = {}, const TrainableMask* mask = nullptr);

  /// Throws std::logic_error when a trainable parameter has no gradient buffer.
  void step();
  void zero_grad();
  std::uint64_t steps() const { return step_; }
  const std::vector<ParamGroup<T>>& groups() const { return groups_; }

 private:
  struct Moments {
    std::vector<double> m, v;
    bool trainable = true;
  };
  std::vector<ParamGroup<T>> groups_;
  std::vector<std::vector<Moments>> moments_;
  AdamConfig cfg_;
  std::uint64_t step_ = 0;
};

extern template class Adam<float>;
extern template class Adam<double>;

}  // namespace csisense
