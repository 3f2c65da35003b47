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

#include "csisense/augment.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>
#include <stdexcept>
#include <string>

namespace csisense {

void AugmentPolicy::validate(std::size_t window_len) const {
  if (jitter_sigma < 0) throw std::invalid_argument("jitter sigma must be >= 0");
  if (scale_sigma < 0) throw std::invalid_argument("scale sigma must be >= 0");
  if (max_segments < 1 || static_cast<std::size_t>(max_segments) > window_len) {
    throw std::invalid_argument("max_segments must lie in [1, " + std::to_string(window_len) + "]");
  }
}

Window jitter(const Window& w, double sigma, Rng& rng) {
  if (sigma < 0) throw std::invalid_argument("jitter sigma must be >= 0");
  Window out = w;
  if (sigma == 0) return out;
  std::normal_distribution<double> noise(0.0, sigma);
  for (auto& v : out.values) v = static_cast<float>(v + noise(rng));
  return out;
}

Window scale(const Window& w, double sigma, Rng& rng) {
  if (sigma < 0) throw std::invalid_argument("scale sigma must be >= 0");
  Window out = w;
  if (sigma == 0) return out;
  std::normal_distribution<double> factor(1.0, sigma);
  const auto alpha = static_cast<float>(factor(rng));
  for (auto& v : out.values) v *= alpha;
  return out;
}

Window permute_segments(const Window& w, const std::vector<std::size_t>& cuts,
                        const std::vector<std::size_t>& order) {
  std::vector<std::size_t> bounds;
  bounds.push_back(0);
  bounds.insert(bounds.end(), cuts.begin(), cuts.end());
  bounds.push_back(w.length);
  const std::size_t k = bounds.size() - 1;
  if (order.size() != k) throw std::invalid_argument("segment order does not match cut count");
  for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
    if (bounds[i] >= bounds[i + 1]) throw std::invalid_argument("segment cuts must be increasing interior indices");
  }
  Window out = w;
  std::size_t dst = 0;
  for (const auto seg : order) {
    if (seg >= k) throw std::invalid_argument("segment index out of range");
    const std::size_t from = bounds[seg] * w.channels;
    const std::size_t to = bounds[seg + 1] * w.channels;
    std::copy(w.values.begin() + static_cast<std::ptrdiff_t>(from),
              w.values.begin() + static_cast<std::ptrdiff_t>(to),
              out.values.begin() + static_cast<std::ptrdiff_t>(dst));
    dst += to - from;
  }
  return out;
}

Window permute(const Window& w, int max_segments, Rng& rng) {
  if (max_segments < 2) throw std::invalid_argument("permute needs max_segments >= 2");
  const int k_max = std::min<int>(max_segments, static_cast<int>(w.length));
  std::uniform_int_distribution<int> pick_k(2, k_max);
  const auto k = static_cast<std::size_t>(pick_k(rng));

  std::vector<std::size_t> interior(w.length - 1);
  std::iota(interior.begin(), interior.end(), std::size_t{1});
  std::vector<std::size_t> cuts;
  std::sample(interior.begin(), interior.end(), std::back_inserter(cuts), k - 1, rng);
  std::sort(cuts.begin(), cuts.end());

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  return permute_segments(w, cuts, order);
}

std::pair<Window, Window> make_view_pair(const Window& w, const AugmentPolicy& policy, Rng& rng) {
  auto view = [&]() {
    Window v = jitter(w, policy.jitter_sigma, rng);
    v = scale(v, policy.scale_sigma, rng);
    if (policy.max_segments >= 2) v = permute(v, policy.max_segments, rng);
    return v;
  };
  Window first = view();
  Window second = view();
  return {std::move(first), std::move(second)};
}

}  // namespace csisense
