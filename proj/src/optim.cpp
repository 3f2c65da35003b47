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

#include "csisense/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace csisense {

template <typename T>
Adam<T>::Adam(std::vector<ParamGroup<T>> groups, AdamConfig cfg, const TrainableMask* mask)
    : groups_(std::move(groups)), cfg_(cfg) {
  for (const auto& group : groups_) {
    if (!(group.lr > 0)) throw std::invalid_argument("learning rate of group '" + group.name + "' must be > 0");
    std::vector<Moments> ms;
    for (const auto& p : group.params) {
      Moments m;
      m.trainable = !mask || mask->is_trainable(p.path);
      if (m.trainable) {
        m.m.assign(p.tensor.numel(), 0.0);
        m.v.assign(p.tensor.numel(), 0.0);
      }
      ms.push_back(std::move(m));
    }
    moments_.push_back(std::move(ms));
  }
}

template <typename T>
void Adam<T>::step() {
  ++step_;
  const double t = static_cast<double>(step_);
  const double c1 = 1.0 - std::pow(cfg_.beta1, t);
  const double c2 = 1.0 - std::pow(cfg_.beta2, t);
  for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
    const double lr = groups_[gi].lr;
    for (std::size_t pi = 0; pi < groups_[gi].params.size(); ++pi) {
      auto& mom = moments_[gi][pi];
      if (!mom.trainable) continue;
      auto& p = groups_[gi].params[pi];
      if (!p.tensor.requires_grad()) {
        throw std::logic_error("trainable parameter '" + p.path + "' has no gradient");
      }
      auto w = p.tensor.data();
      const auto g = p.tensor.grad();
      for (std::size_t i = 0; i < w.size(); ++i) {
        const double gi_ = g[i];
        mom.m[i] = cfg_.beta1 * mom.m[i] + (1.0 - cfg_.beta1) * gi_;
        mom.v[i] = cfg_.beta2 * mom.v[i] + (1.0 - cfg_.beta2) * gi_ * gi_;
        const double mhat = mom.m[i] / c1;
        const double vhat = mom.v[i] / c2;
        w[i] = static_cast<T>(w[i] - lr * mhat / (std::sqrt(vhat) + cfg_.eps));
      }
    }
  }
}

template <typename T>
void Adam<T>::zero_grad() {
  for (auto& group : groups_)
    for (auto& p : group.params) p.tensor.zero_grad();
}

template class Adam<float>;
template class Adam<double>;

}  // namespace csisense
