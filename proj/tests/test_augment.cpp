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

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "csisense/augment.hpp"

using namespace csisense;

namespace {

Window ramp_window(std::size_t length, std::size_t channels) {
  Window w;
  w.length = length;
  w.channels = channels;
  for (std::size_t i = 0; i < length * channels; ++i) w.values.push_back(1.0f + 0.01f * static_cast<float>(i));
  return w;
}

// Time rows as tuples, for multiset comparisons.
std::vector<std::vector<float>> rows(const Window& w) {
  std::vector<std::vector<float>> out;
  for (std::size_t t = 0; t < w.length; ++t) {
    out.emplace_back(w.values.begin() + static_cast<std::ptrdiff_t>(t * w.channels),
                     w.values.begin() + static_cast<std::ptrdiff_t>((t + 1) * w.channels));
  }
  return out;
}

}  // namespace

TEST_CASE("zero sigma is the identity") {
  const auto w = ramp_window(100, 4);
  Rng rng(1);
  CHECK(jitter(w, 0.0, rng).values == w.values);
  CHECK(scale(w, 0.0, rng).values == w.values);
}

TEST_CASE("jitter noise has the requested spread") {
  const auto w = ramp_window(1000, 52);
  Rng rng(2);
  const auto j = jitter(w, 0.03, rng);
  double m = 0, m2 = 0;
  for (std::size_t i = 0; i < w.values.size(); ++i) {
    const double d = static_cast<double>(j.values[i]) - w.values[i];
    m += d;
    m2 += d * d;
  }
  const double n = static_cast<double>(w.values.size());
  const double sd = std::sqrt(m2 / n - (m / n) * (m / n));
  CHECK(std::abs(sd - 0.03) < 0.05 * 0.03);
}

TEST_CASE("scaling applies one factor to the whole window") {
  const auto w = ramp_window(100, 4);
  Rng rng(3);
  const auto s = scale(w, 0.1, rng);
  const double alpha = static_cast<double>(s.values[0]) / w.values[0];
  for (std::size_t i = 0; i < w.values.size(); ++i) {
    CHECK(static_cast<double>(s.values[i]) / w.values[i] == doctest::Approx(alpha).epsilon(1e-6));
  }
  std::vector<double> alphas;
  for (int i = 0; i < 4000; ++i) alphas.push_back(static_cast<double>(scale(w, 0.1, rng).values[0]) / w.values[0]);
  double m = 0, m2 = 0;
  for (double a : alphas) {
    m += a;
    m2 += a * a;
  }
  m /= 4000;
  CHECK(std::abs(m - 1.0) < 0.01);
  CHECK(std::abs(std::sqrt(m2 / 4000 - m * m) - 0.1) < 0.005);
}

TEST_CASE("permutation keeps the multiset of time rows") {
  const auto w = ramp_window(100, 3);
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = permute(w, 5, rng);
    auto a = rows(w);
    auto b = rows(p);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }
}

TEST_CASE("two-segment swap") {
  const auto w = ramp_window(10, 1);
  const auto p = permute_segments(w, {4}, {1, 0});
  const std::vector<float> expect(w.values.begin() + 4, w.values.end());
  CHECK(std::equal(expect.begin(), expect.end(), p.values.begin()));
  CHECK(std::equal(w.values.begin(), w.values.begin() + 4, p.values.begin() + 6));
  CHECK_THROWS_AS(permute_segments(w, {4}, {0}), std::invalid_argument);
  CHECK_THROWS_AS(permute_segments(w, {0}, {1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(permute_segments(w, {4}, {2, 0}), std::invalid_argument);
}

TEST_CASE("view pairs are seeded and distinct") {
  const auto w = ramp_window(100, 4);
  AugmentPolicy policy;
  Rng a(9), b(9);
  const auto [a1, a2] = make_view_pair(w, policy, a);
  const auto [b1, b2] = make_view_pair(w, policy, b);
  CHECK(a1.values == b1.values);
  CHECK(a2.values == b2.values);
  CHECK(a1.values != a2.values);
  CHECK(a1.values != w.values);
}

TEST_CASE("one segment disables permutation") {
  const auto w = ramp_window(100, 2);
  AugmentPolicy policy;
  policy.jitter_sigma = 0;
  policy.scale_sigma = 0;
  policy.max_segments = 1;
  CHECK_NOTHROW(policy.validate(100));
  Rng rng(5);
  const auto [v1, v2] = make_view_pair(w, policy, rng);
  CHECK(v1.values == w.values);
  CHECK(v2.values == w.values);
}

TEST_CASE("policy validation") {
  AugmentPolicy p;
  p.max_segments = 0;
  CHECK_THROWS_AS(p.validate(100), std::invalid_argument);
  p.max_segments = 101;
  CHECK_THROWS_AS(p.validate(100), std::invalid_argument);
  p = {};
  p.jitter_sigma = -1;
  CHECK_THROWS_AS(p.validate(100), std::invalid_argument);
}
