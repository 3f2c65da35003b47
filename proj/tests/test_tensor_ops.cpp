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

#include <cmath>
#include <stdexcept>
#include <vector>

#include "csisense/ops.hpp"
#include "csisense/random.hpp"

using namespace csisense;

namespace {

Tensor<double> t(Shape s, std::vector<double> v, bool rg = false) { return Tensor<double>(std::move(s), std::move(v), rg); }

void check_values(const Tensor<double>& x, const std::vector<double>& expect, double tol = 1e-12) {
  REQUIRE(x.numel() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(x.data()[i] == doctest::Approx(expect[i]).epsilon(tol));
}

}  // namespace

TEST_CASE("conv1d hand cases and shapes") {
  Graph<double> g(false);
  SUBCASE("cross-correlation [1,2,3] * [1,1]") {
    const auto y = conv1d(g, t({1, 1, 3}, {1, 2, 3}), t({1, 1, 2}, {1, 1}), t({1}, {0}), 1, 0);
    CHECK(y.shape() == Shape{1, 1, 2});
    check_values(y, {3, 5});
  }
  SUBCASE("identity kernel") {
    const auto x = t({1, 1, 4}, {0.5, -1, 2, 7});
    check_values(conv1d(g, x, t({1, 1, 1}, {1}), t({1}, {0}), 1, 0), {0.5, -1, 2, 7});
  }
  SUBCASE("stem geometry 52x100 -> 64x50") {
    const auto y = conv1d(g, Tensor<double>(Shape{1, 52, 100}), Tensor<double>(Shape{64, 52, 7}),
                          Tensor<double>(Shape{64}), 2, 3);
    CHECK(y.shape() == Shape{1, 64, 50});
  }
  SUBCASE("rejects mismatched channels") {
    CHECK_THROWS_AS(conv1d(g, Tensor<double>(Shape{1, 3, 10}), Tensor<double>(Shape{2, 4, 3}),
                           Tensor<double>(Shape{2}), 1, 0),
                    ShapeError);
  }
}

TEST_CASE("batchnorm1d train and eval") {
  Graph<double> g(false);
  SUBCASE("x=[1,3], gamma=2, beta=1") {
    BatchNormStats<double> stats(1);
    const auto y = batchnorm1d(g, t({1, 1, 2}, {1, 3}), t({1}, {2}), t({1}, {1}), stats, Mode::kTrain);
    CHECK(y.data()[0] == doctest::Approx(-1.0).epsilon(1e-5));
    CHECK(y.data()[1] == doctest::Approx(3.0).epsilon(1e-5));
    // running stats: momentum 0.1 toward mean 2 and unbiased variance 2
    CHECK(stats.mean.data()[0] == doctest::Approx(0.2));
    CHECK(stats.var.data()[0] == doctest::Approx(0.9 * 1.0 + 0.1 * 2.0));
  }
  SUBCASE("constant channel gives beta") {
    BatchNormStats<double> stats(1);
    const auto y = batchnorm1d(g, t({2, 1, 3}, {4, 4, 4, 4, 4, 4}), t({1}, {3}), t({1}, {0.25}), stats, Mode::kTrain);
    for (double v : y.data()) CHECK(v == doctest::Approx(0.25));
  }
  SUBCASE("eval uses running statistics") {
    BatchNormStats<double> stats(1);
    stats.mean.data()[0] = 1.0;
    stats.var.data()[0] = 4.0;
    const auto y = batchnorm1d(g, t({1, 1, 2}, {1, 5}), t({1}, {1}), t({1}, {0}), stats, Mode::kEval);
    CHECK(y.data()[0] == doctest::Approx(0.0));
    CHECK(y.data()[1] == doctest::Approx(4.0 / std::sqrt(4.0 + 1e-5)));
    CHECK(stats.mean.data()[0] == 1.0);
  }
}

TEST_CASE("activations") {
  Graph<double> g(false);
  check_values(relu(g, t({2}, {-2, 3})), {0, 3});
  check_values(sigmoid(g, t({2}, {0, std::log(3.0)})), {0.5, 0.75});
}

TEST_CASE("pooling") {
  Graph<double> g(false);
  check_values(maxpool1d(g, t({1, 1, 4}, {1, 4, 2, 0}), 2, 2, 0), {4, 2});
  CHECK(window_out_len(50, 3, 2, 1) == 25);
  const auto c = maxpool1d(g, t({1, 1, 5}, {-3, -3, -3, -3, -3}), 3, 2, 1);
  for (double v : c.data()) CHECK(v == -3);  // padding never wins
  check_values(global_avg_pool1d(g, t({1, 1, 3}, {2, 4, 6})), {4});
  CHECK(global_avg_pool1d(g, Tensor<double>(Shape{1, 256, 7})).shape() == Shape{1, 256});
}

TEST_CASE("linear and softmax") {
  Graph<double> g(false);
  check_values(linear(g, t({1, 2}, {1, 2}), t({2, 2}, {1, 1, 0, 1}), t({2}, {0, 1})), {3, 3});
  check_values(softmax(g, t({1, 3}, {0, 0, 0})), {1.0 / 3, 1.0 / 3, 1.0 / 3});
  const double c = 17.5;
  check_values(softmax(g, t({1, 2}, {c, c + std::log(2.0)})), {1.0 / 3, 2.0 / 3});
  const auto a = softmax(g, t({1, 3}, {0.3, -1.2, 2.0}));
  const auto b = softmax(g, t({1, 3}, {100.3, 98.8, 102.0}));
  check_values(a, b.to_vector(), 1e-12);
}

TEST_CASE("reverse-mode basics") {
  SUBCASE("d sum(x) = ones") {
    auto x = t({2, 3}, {1, 2, 3, 4, 5, 6}, true);
    Graph<double> g;
    g.backward(sum(g, x));
    for (double v : x.grad()) CHECK(v == 1.0);
  }
  SUBCASE("d sum(x^2) at 3 = 6") {
    auto x = t({1}, {3}, true);
    Graph<double> g;
    g.backward(sum(g, mul(g, x, x)));
    CHECK(x.grad()[0] == 6.0);
  }
  SUBCASE("second backward throws") {
    auto x = t({1}, {3}, true);
    Graph<double> g;
    const auto l = sum(g, x);
    g.backward(l);
    CHECK_THROWS_AS(g.backward(l), std::logic_error);
  }
  SUBCASE("non-scalar loss throws") {
    auto x = t({2}, {1, 2}, true);
    Graph<double> g;
    CHECK_THROWS(g.backward(scale(g, x, 2.0)));
  }
  SUBCASE("non-recording graph records nothing") {
    auto x = t({2}, {1, 2}, true);
    Graph<double> g(false);
    sum(g, x);
    CHECK(g.size() == 0);
  }
  SUBCASE("ops on constants are not recorded") {
    Graph<double> g;
    sum(g, t({2}, {1, 2}));
    CHECK(g.size() == 0);
  }
}
