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

#include <doctest.h>

#include <stdexcept>

#include "csisense/optim.hpp"

using namespace csisense;

namespace {

NamedParam<double> param(const std::string& path, double value, double grad) {
  Tensor<double> t(Shape{1}, std::vector<double>{value}, true);
  t.grad()[0] = grad;
  return {path, t, ParamRole::kBackbone};
}

}  // namespace

TEST_CASE("first Adam step moves by the learning rate") {
  auto p = param("w", 1.0, 1.0);
  Adam<double> opt({{"all", 0.1, {p}}});
  opt.step();
  CHECK(p.tensor.item() == doctest::Approx(0.9).epsilon(1e-9));
  CHECK(opt.steps() == 1);
  // The step size stays near lr for a constant gradient.
  opt.step();
  CHECK(p.tensor.item() == doctest::Approx(0.8).epsilon(1e-6));
}

TEST_CASE("zero gradient leaves a fresh parameter in place") {
  auto p = param("w", 2.0, 0.0);
  Adam<double> opt({{"all", 0.1, {p}}});
  opt.step();
  CHECK(p.tensor.item() == 2.0);
}

TEST_CASE("groups keep their own learning rates") {
  auto a = param("a", 1.0, 1.0);
  auto b = param("b", 1.0, 1.0);
  Adam<double> opt({{"slow", 1e-3, {a}}, {"fast", 1e-1, {b}}});
  opt.step();
  CHECK(a.tensor.item() == doctest::Approx(0.999).epsilon(1e-9));
  CHECK(b.tensor.item() == doctest::Approx(0.9).epsilon(1e-9));
}

TEST_CASE("masked parameters are never stepped") {
  auto a = param("frozen", 1.0, 5.0);
  auto b = param("live", 1.0, 5.0);
  TrainableMask mask;
  mask.trainable = {{"frozen", false}, {"live", true}};
  Adam<double> opt({{"all", 0.1, {a, b}}}, {}, &mask);
  opt.step();
  CHECK(a.tensor.item() == 1.0);
  CHECK(b.tensor.item() < 1.0);
}

TEST_CASE("zero_grad clears every buffer") {
  auto p = param("w", 1.0, 3.0);
  Adam<double> opt({{"all", 0.1, {p}}});
  opt.zero_grad();
  CHECK(p.tensor.grad()[0] == 0.0);
}

TEST_CASE("misuse is rejected") {
  NamedParam<double> p{"w", Tensor<double>(Shape{1}, std::vector<double>{1.0}), ParamRole::kBackbone};
  Adam<double> opt({{"all", 0.1, {p}}});
  CHECK_THROWS_AS(opt.step(), std::logic_error);
  CHECK_THROWS_AS(Adam<double>({{"bad", 0.0, {}}}), std::invalid_argument);
}
