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

// Debounce/cooldown occupancy counter over per-window event predictions.
//
//   NO_EVENT --event--> DEBOUNCING --threshold identical--> WAITING_FOR_NO_EVENT
//       ^                   |  any other prediction              |
//       +-------------------+<---- cooldown consecutive no_event-+

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "csisense/labels.hpp"

namespace csisense {

struct CounterConfig {
  int event_threshold = 5;
  int cooldown_period = 10;
  bool clamp_at_zero = true;

  void validate() const;
};

enum class CounterPhase { kNoEvent, kDebouncing, kWaitingForNoEvent };

std::string_view to_string(CounterPhase phase);

struct CounterState {
  CounterPhase phase = CounterPhase::kNoEvent;
  std::optional<EventLabel> buffered_event;
  int consecutive_count = 0;
  int cooldown_progress = 0;
  int occupancy = 0;

  bool operator==(const CounterState&) const = default;
};

/// One transition. Throws std::invalid_argument for a label outside
/// enter/exit/no_event.
CounterState step(const CounterState& state, EventLabel pred, const CounterConfig& cfg);

struct TraceEntry {
  EventLabel prediction;
  CounterPhase phase;
  int occupancy;
};

struct OccupancyTrace {
  std::vector<TraceEntry> entries;
  CounterState final_state;

  std::vector<int> occupancy() const;
};

/// Folds `step` over the predictions starting from `initial`.
OccupancyTrace run_trace(std::span<const EventLabel> preds, const CounterConfig& cfg,
                         const CounterState& initial = {});
/// Same, from class indices of the doorway label set.
OccupancyTrace run_trace(std::span<const int> preds, const CounterConfig& cfg,
                         const CounterState& initial = {});

/// window_index,prediction,phase,occupancy
std::string trace_to_csv(const OccupancyTrace& trace);

}  // namespace csisense
