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
#include <set>
#include <stdexcept>

#include "csisense/synth.hpp"

using namespace csisense;

namespace {

double window_mean(const Window& w) {
  double acc = 0;
  for (float v : w.values) acc += v;
  return acc / static_cast<double>(w.values.size());
}

// Energy left after removing a 0.5 s moving average from each column: keeps
// the 1-6 Hz burst band of the low-passed signal and drops the baseline.
double band_energy(const Window& w) {
  constexpr std::size_t half = 25;
  double e = 0;
  for (std::size_t c = 0; c < w.channels; ++c) {
    for (std::size_t t = half; t + half < w.length; ++t) {
      double avg = 0;
      for (std::size_t k = t - half; k <= t + half; ++k) avg += w.at(k, c);
      avg /= 2 * half + 1;
      const double d = w.at(t, c) - avg;
      e += d * d;
    }
  }
  return e;
}

}  // namespace

TEST_CASE("series generation is deterministic") {
  const auto profile = DomainProfile::make(0);
  ScenarioScript script;
  script.duration_s = 40;
  script.events = {{5, EventLabel::kEnter}, {25, EventLabel::kExit}};
  const auto a = generate_series(script, profile, 3);
  const auto b = generate_series(script, profile, 3);
  const auto c = generate_series(script, profile, 4);
  CHECK(a.amplitudes == b.amplitudes);
  CHECK(a.amplitudes != c.amplitudes);
  CHECK(a.length() == 4000);
  REQUIRE(a.marks.size() == 2);
  CHECK(a.marks[0].timestamp == script.start_time + 5.0);
  CHECK(a.marks[1].label == static_cast<int>(EventLabel::kExit));
}

TEST_CASE("an empty script is stationary noise around the baseline") {
  const auto profile = DomainProfile::make(0);
  ScenarioScript script;
  script.duration_s = 30;
  const auto s = generate_series(script, profile, 1);
  CHECK(s.marks.empty());
  for (std::size_t c = 0; c < s.channels; c += 13) {
    double m = 0;
    for (std::size_t t = 0; t < s.length(); ++t) m += s.at(t, c);
    m /= static_cast<double>(s.length());
    CHECK(std::abs(m - profile.baseline[c]) < 0.01);
  }
}

TEST_CASE("one enter at five seconds labels the overlapping windows") {
  ScenarioScript script;
  script.duration_s = 20;
  script.events = {{5, EventLabel::kEnter}};
  const auto raw = generate_series(script, DomainProfile::make(0), 2);
  const auto prepared = prepare_session(raw, PreprocessOptions{});
  REQUIRE(prepared.windows.size() == 39);
  CHECK(prepared.labeled.size() == 39);
  for (const auto& lw : prepared.labeled) {
    const double start = lw.window.start_index / 100.0;
    const bool overlaps = start + 1.0 > 3.0 && start < 7.0;
    CHECK(lw.label == (overlaps ? 0 : 2));
  }
}

TEST_CASE("scripts are validated") {
  ScenarioScript s;
  s.events = {{20, EventLabel::kEnter}, {25, EventLabel::kExit}};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.events = {{20, EventLabel::kExit}};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.events = {{59, EventLabel::kEnter}};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.events = {{20, EventLabel::kEnter}, {40, EventLabel::kExit}};
  CHECK_NOTHROW(s.validate());

  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const auto r = ScenarioScript::random("r", 60, 3, 15, 0, rng);
    CHECK_NOTHROW(r.validate());
    std::set<EventLabel> kinds;
    int occ = 0;
    for (const auto& e : r.events) {
      kinds.insert(e.label);
      occ += e.label == EventLabel::kEnter ? 1 : -1;
      CHECK(occ >= 0);
    }
    CHECK(kinds.size() == 2);
  }
}

TEST_CASE("dataset splits are disjoint whole sessions") {
  const auto data = generate_dataset(10, DomainProfile::make(0), {0.8, 0.1, 0.1}, 9);
  CHECK(data.train.size() == 8);
  CHECK(data.val.size() == 1);
  CHECK(data.test.size() == 1);
  std::set<std::string> ids;
  for (const auto* split : {&data.train, &data.val, &data.test})
    for (const auto& s : *split) ids.insert(s.script.id);
  CHECK(ids.size() == 10);
  for (auto n : data.train_class_counts) CHECK(n > 0);
  for (const auto& s : data.train) {
    CHECK(s.occupancy.size() == s.prepared.windows.size());
    for (int o : s.occupancy) CHECK(o >= 0);
  }
  CHECK_THROWS(generate_dataset(10, DomainProfile::make(0), {0.5, 0.1, 0.1}, 9));
  CHECK_THROWS(generate_dataset(10, DomainProfile::make(0), {0.0, 0.5, 0.5}, 9));
}

TEST_CASE("domain profiles are separable by mean amplitude") {
  const auto w0 = all_windows(generate_dataset(3, DomainProfile::make(0), {1, 0, 0}, 1).train);
  const auto w1 = all_windows(generate_dataset(3, DomainProfile::make(1), {1, 0, 0}, 2).train);
  double m0 = 0, m1 = 0;
  for (const auto& w : w0) m0 += window_mean(w);
  for (const auto& w : w1) m1 += window_mean(w);
  m0 /= static_cast<double>(w0.size());
  m1 /= static_cast<double>(w1.size());
  const double threshold = 0.5 * (m0 + m1);
  const bool higher_is_one = m1 > m0;
  std::size_t correct = 0;
  for (const auto& w : w0) correct += (window_mean(w) > threshold) != higher_is_one;
  for (const auto& w : w1) correct += (window_mean(w) > threshold) == higher_is_one;
  CHECK(static_cast<double>(correct) / static_cast<double>(w0.size() + w1.size()) > 0.95);
}

TEST_CASE("bursts are detectable by band energy on clean data") {
  auto profile = DomainProfile::make(0);
  profile.noise_std = 0.0;
  const auto data = generate_dataset(6, profile, {1, 0, 0}, 4);
  const auto labeled = labeled_windows(data.train);
  double peak = 0;
  for (const auto& lw : labeled) peak = std::max(peak, band_energy(lw.window));
  std::size_t correct = 0;
  for (const auto& lw : labeled) {
    const bool event = lw.label != static_cast<int>(EventLabel::kNoEvent);
    correct += (band_energy(lw.window) > 1e-3 * peak) == event;
  }
  CHECK(static_cast<double>(correct) / static_cast<double>(labeled.size()) > 0.95);
}
