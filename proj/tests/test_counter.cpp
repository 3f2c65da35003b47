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

#include "csisense/counter.hpp"

using namespace csisense;

namespace {

constexpr auto E = EventLabel::kEnter;
constexpr auto X = EventLabel::kExit;
constexpr auto N = EventLabel::kNoEvent;

std::vector<EventLabel> seq(std::initializer_list<std::pair<EventLabel, int>> runs) {
  std::vector<EventLabel> out;
  for (const auto& [label, n] : runs) out.insert(out.end(), static_cast<std::size_t>(n), label);
  return out;
}

OccupancyTrace run(const std::vector<EventLabel>& preds, CounterConfig cfg = {}) {
  return run_trace(std::span<const EventLabel>(preds), cfg);
}

}  // namespace

TEST_CASE("reference traces") {
  auto t = run(seq({{E, 5}}));
  CHECK(t.final_state.occupancy == 1);
  CHECK(t.final_state.phase == CounterPhase::kWaitingForNoEvent);

  t = run(seq({{E, 4}, {N, 1}}));
  CHECK(t.final_state.occupancy == 0);
  CHECK(t.final_state.phase == CounterPhase::kNoEvent);

  CHECK(run(seq({{E, 5}, {N, 10}, {E, 5}})).final_state.occupancy == 2);
  CHECK(run(seq({{E, 5}, {N, 3}, {E, 5}, {N, 10}})).final_state.occupancy == 1);

  t = run(seq({{X, 5}}));
  CHECK(t.final_state.occupancy == 0);
}

TEST_CASE("enter then exit returns to zero") {
  const auto t = run(seq({{E, 5}, {N, 10}, {X, 5}, {N, 10}}));
  CHECK(t.final_state.occupancy == 0);
  CHECK(t.final_state.phase == CounterPhase::kNoEvent);
  const auto occ = t.occupancy();
  CHECK(occ[4] == 1);
  CHECK(occ[3] == 0);
  CHECK(occ[24] == 0);
}

TEST_CASE("debouncing resets on a different prediction") {
  auto t = run(seq({{E, 3}, {X, 1}, {E, 4}}));
  CHECK(t.final_state.occupancy == 0);
  CHECK(t.final_state.phase == CounterPhase::kDebouncing);
  CHECK(t.final_state.consecutive_count == 4);
}

TEST_CASE("cooldown restarts on any event prediction") {
  auto t = run(seq({{E, 5}, {N, 9}, {X, 1}, {N, 9}}));
  CHECK(t.final_state.phase == CounterPhase::kWaitingForNoEvent);
  CHECK(t.final_state.cooldown_progress == 9);
}

TEST_CASE("clamping can be disabled") {
  CounterConfig cfg;
  cfg.clamp_at_zero = false;
  CHECK(run(seq({{X, 5}}), cfg).final_state.occupancy == -1);
}

TEST_CASE("threshold one and zero cooldown") {
  CounterConfig cfg;
  cfg.event_threshold = 1;
  cfg.cooldown_period = 0;
  CHECK(run(seq({{E, 3}}), cfg).final_state.occupancy == 3);
}

TEST_CASE("class-index traces and CSV") {
  const std::vector<int> idx{0, 0, 0, 0, 0, 2};
  const auto t = run_trace(std::span<const int>(idx), CounterConfig{});
  CHECK(t.final_state.occupancy == 1);
  const auto csv = trace_to_csv(t);
  CHECK(csv.starts_with("window_index,prediction,phase,occupancy\n"));
  CHECK(csv.find("4,enter,WAITING_FOR_NO_EVENT,1") != std::string::npos);
  const std::vector<int> bad{7};
  CHECK_THROWS(run_trace(std::span<const int>(bad), CounterConfig{}));
}

TEST_CASE("config validation") {
  CounterConfig cfg;
  cfg.event_threshold = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.cooldown_period = -1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
