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
#include <utility>
#include <vector>

#include "csisense/dsp.hpp"
#include "csisense/random.hpp"

namespace csisense {

struct AugmentPolicy {
  double jitter_sigma = 0.03;
  double scale_sigma = 0.1;
  /// Upper bound of the segment count; 1 disables permutation.
  int max_segments = 5;
  std::uint64_t seed = 0;

  void validate(std::size_t window_len) const;
};

/// Adds i.i.d. N(0, sigma^2) noise to every element.
Window jitter(const Window& w, double sigma, Rng& rng);

/// Multiplies the whole window by one alpha ~ N(1, sigma^2).
Window scale(const Window& w, double sigma, Rng& rng);

/// Splits the time axis into k contiguous segments, k uniform in
/// {2..max_segments}, and reassembles them in a uniformly random order.
Window permute(const Window& w, int max_segments, Rng& rng);

/// Deterministic core of permute: `cuts` are the sorted interior boundaries,
/// `order` lists which segment goes in each output slot.
Window permute_segments(const Window& w, const std::vector<std::size_t>& cuts,
                        const std::vector<std::size_t>& order);

/// Two views, each jitter -> scale -> permute with its own draws.
std::pair<Window, Window> make_view_pair(const Window& w, const AugmentPolicy& policy, Rng& rng);

}  // namespace csisense
