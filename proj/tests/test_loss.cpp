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

#include "csisense/loss.hpp"
#include "test_util.hpp"

using namespace csisense;
using csisense::testing::random_tensor;

namespace {

// Direct evaluation of the contrastive objective: cosine similarities,
// positive partner i^1, every other row in the denominator.
double nt_xent_brute(const std::vector<double>& z, std::size_t rows, std::size_t dim, double tau) {
  auto sim = [&](std::size_t a, std::size_t b) {
    double dot = 0, na = 0, nb = 0;
    for (std::size_t p = 0; p < dim; ++p) {
      dot += z[a * dim + p] * z[b * dim + p];
      na += z[a * dim + p] * z[a * dim + p];
      nb += z[b * dim + p] * z[b * dim + p];
    }
    return dot / std::sqrt(na * nb);
  };
  double total = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    double denom = 0;
    for (std::size_t k = 0; k < rows; ++k)
      if (k != i) denom += std::exp(sim(i, k) / tau);
    total += -std::log(std::exp(sim(i, i ^ 1) / tau) / denom);
  }
  return total / static_cast<double>(rows);
}

double eval(const Tensor<double>& t) { return t.item(); }

Tensor<double> tensor2(std::size_t r, std::size_t c, std::vector<double> v) { return Tensor<double>({r, c}, std::move(v)); }

}  // namespace

TEST_CASE("contrastive loss matches brute force on a random grid") {
  Rng rng(21);
  for (std::size_t n = 1; n <= 3; ++n) {
    for (std::size_t p = 1; p <= 3; ++p) {
      for (double tau : {0.1, 0.5, 1.0}) {
        for (int rep = 0; rep < 5; ++rep) {
          auto z = random_tensor<double>({2 * n, p}, rng, 0.1, 1.0);
          std::bernoulli_distribution flip(0.5);
          for (auto& v : z.data())
            if (flip(rng)) v = -v;
          Graph<double> g(false);
          const double got = eval(nt_xent(g, z, tau));
          CHECK(std::abs(got - nt_xent_brute(z.to_vector(), 2 * n, p, tau)) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("contrastive loss special cases") {
  Graph<double> g(false);
  Rng rng(22);
  for (int i = 0; i < 10; ++i) CHECK(eval(nt_xent(g, random_tensor<double>({2, 3}, rng), 0.1)) == 0.0);

  const auto ortho = tensor2(4, 2, {1, 0, 1, 0, 0, 1, 0, 1});
  const double expect = std::log1p(2 * std::exp(-10.0));
  CHECK(eval(nt_xent(g, ortho, 0.1)) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(expect == doctest::Approx(9.08e-5).epsilon(1e-3));

  auto z = random_tensor<double>({6, 3}, rng);
  auto z3 = z.clone();
  for (auto& v : z3.data()) v *= 3.7;
  CHECK(eval(nt_xent(g, z, 0.2)) == doctest::Approx(eval(nt_xent(g, z3, 0.2))).epsilon(1e-12));

  CHECK_THROWS_AS(nt_xent(g, random_tensor<double>({3, 2}, rng), 0.1), std::invalid_argument);
  CHECK_THROWS_AS(nt_xent(g, tensor2(2, 2, {0, 0, 1, 1}), 0.1), std::invalid_argument);
  CHECK_THROWS_AS(nt_xent(g, ortho, 0.0), std::invalid_argument);
}

TEST_CASE("contrastive loss falls as a positive pair aligns") {
  // Anchor pair rotates towards each other; negatives stay orthogonal to both.
  Graph<double> g(false);
  double prev = 1e9;
  for (double angle : {1.2, 0.8, 0.4, 0.0}) {
    const auto z = Tensor<double>({4, 3}, {1, 0, 0, std::cos(angle), std::sin(angle), 0, 0, 0, 1, 0, 0, 1});
    const double l = eval(nt_xent(g, z, 0.5));
    CHECK(l < prev);
    prev = l;
  }
}

TEST_CASE("cross-entropy values") {
  Graph<double> g(false);
  const std::vector<int> y2{2};
  CHECK(eval(cross_entropy(g, tensor2(1, 3, {0, 0, 0}), y2)) == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(eval(cross_entropy(g, tensor2(1, 3, {1, 2, 3}), y2)) == doctest::Approx(0.4076).epsilon(1e-4));
  CHECK(eval(cross_entropy(g, tensor2(1, 3, {0, 0, 200}), y2)) < 1e-80);
  CHECK(eval(cross_entropy(g, tensor2(1, 3, {1001, 1002, 1003}), y2)) ==
        doctest::Approx(eval(cross_entropy(g, tensor2(1, 3, {1, 2, 3}), y2))).epsilon(1e-12));
  const std::vector<int> bad{3};
  CHECK_THROWS(cross_entropy(g, tensor2(1, 3, {1, 2, 3}), bad));
}

TEST_CASE("focal loss values") {
  Graph<double> g(false);
  // Two classes with logit gap ln 9 give p_t = 0.9.
  const auto logits = tensor2(1, 2, {std::log(9.0), 0});
  const std::vector<int> y{0};
  CHECK(eval(focal_loss(g, logits, y, 2.0)) == doctest::Approx(0.01 * -std::log(0.9)).epsilon(1e-10));
  CHECK(eval(focal_loss(g, logits, y, 2.0)) == doctest::Approx(1.054e-3).epsilon(1e-3));
  Rng rng(23);
  const auto z = random_tensor<double>({5, 4}, rng, -2, 2);
  const std::vector<int> labels{0, 3, 1, 2, 2};
  CHECK(eval(focal_loss(g, z, labels, 0.0)) == doctest::Approx(eval(cross_entropy(g, z, labels))).epsilon(1e-12));
  CHECK(eval(focal_loss(g, z, labels, 2.0)) <= eval(cross_entropy(g, z, labels)));
}

TEST_CASE("adversarial losses") {
  Graph<double> g(false);
  const double l3 = std::log(3.0);
  const auto zeros = tensor2(2, 1, {0, 0});
  CHECK(eval(adda_discriminator_loss(g, zeros, zeros)) == doctest::Approx(2 * std::log(2.0)).epsilon(1e-12));
  CHECK(eval(adda_discriminator_loss(g, tensor2(1, 1, {l3}), tensor2(1, 1, {-l3}))) ==
        doctest::Approx(2 * -std::log(0.75)).epsilon(1e-12));
  CHECK(eval(adda_discriminator_loss(g, tensor2(1, 1, {l3}), tensor2(1, 1, {-l3}))) ==
        doctest::Approx(0.5754).epsilon(1e-4));
  CHECK(eval(adda_discriminator_loss(g, tensor2(1, 1, {800}), tensor2(1, 1, {-800}))) < 1e-300);
  CHECK(eval(adda_generator_loss(g, zeros)) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(eval(adda_generator_loss(g, tensor2(1, 1, {l3}))) == doctest::Approx(0.2877).epsilon(1e-4));

  // Swapping domains and negating logits leaves the loss unchanged.
  const auto s = tensor2(3, 1, {0.3, -1.2, 2.0});
  const auto t = tensor2(2, 1, {0.7, -0.1});
  const auto sn = tensor2(3, 1, {-0.3, 1.2, -2.0});
  const auto tn = tensor2(2, 1, {-0.7, 0.1});
  CHECK(eval(adda_discriminator_loss(g, s, t)) == doctest::Approx(eval(adda_discriminator_loss(g, tn, sn))).epsilon(1e-12));
}

TEST_CASE("softplus is stable") {
  CHECK(softplus(0.0) == doctest::Approx(std::log(2.0)));
  CHECK(softplus(1000.0) == doctest::Approx(1000.0));
  CHECK(softplus(-1000.0) >= 0.0);
  CHECK(softplus(-1000.0) < 1e-300);
}
