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

#include "csisense/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace csisense {

namespace {

double evaluate(const Objective& objective) {
  Graph<double> g(false);
  return objective(g).item();
}

}  // namespace

double grad_check(const Objective& objective, std::vector<Tensor<double>> wrt,
                  const GradCheckOptions& opts) {
  std::vector<bool> had_grad;
  for (auto& t : wrt) {
    had_grad.push_back(t.requires_grad());
    t.set_requires_grad(true);
  }

  {
    Graph<double> g;
    auto loss = objective(g);
    g.backward(loss);
  }
  std::vector<std::vector<double>> analytic;
  for (auto& t : wrt) analytic.emplace_back(t.grad().begin(), t.grad().end());

  std::mt19937_64 rng(opts.seed);
  double worst = 0.0;
  for (std::size_t ti = 0; ti < wrt.size(); ++ti) {
    auto& t = wrt[ti];
    std::vector<std::size_t> idx(t.numel());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    if (opts.max_elements != 0 && idx.size() > opts.max_elements) {
      std::shuffle(idx.begin(), idx.end(), rng);
      idx.resize(opts.max_elements);
    }
    auto values = t.data();
    for (const auto i : idx) {
      const double saved = values[i];
      values[i] = saved + opts.eps;
      const double up = evaluate(objective);
      values[i] = saved - opts.eps;
      const double down = evaluate(objective);
      values[i] = saved;
      const double numeric = (up - down) / (2.0 * opts.eps);
      const double err = std::abs(analytic[ti][i] - numeric) / std::max(1.0, std::abs(numeric));
      worst = std::max(worst, err);
    }
  }

  for (std::size_t ti = 0; ti < wrt.size(); ++ti) wrt[ti].set_requires_grad(had_grad[ti]);
  return worst;
}

double grad_check(const std::function<Tensor<double>(Graph<double>&, const Tensor<double>&)>& f,
                  Tensor<double> x, double eps) {
  GradCheckOptions opts;
  opts.eps = eps;
  return grad_check([&](Graph<double>& g) { return f(g, x); }, {x}, opts);
}

}  // namespace csisense
