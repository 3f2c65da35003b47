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

#include "csisense/counter.hpp"

#include <stdexcept>

namespace csisense {

void CounterConfig::validate() const {
  if (event_threshold < 1) throw std::invalid_argument("event_threshold must be >= 1");
  if (cooldown_period < 0) throw std::invalid_argument("cooldown_period must be >= 0");
}

std::string_view to_string(CounterPhase phase) {
  switch (phase) {
    case CounterPhase::kNoEvent: return "NO_EVENT";
    case CounterPhase::kDebouncing: return "DEBOUNCING";
    case CounterPhase::kWaitingForNoEvent: return "WAITING_FOR_NO_EVENT";
  }
  return "?";
}

namespace {

CounterState confirm(CounterState s, EventLabel event, const CounterConfig& cfg) {
  if (event == EventLabel::kEnter) {
    ++s.occupancy;
  } else if (!cfg.clamp_at_zero || s.occupancy > 0) {
    --s.occupancy;
  }
  s.buffered_event.reset();
  s.consecutive_count = 0;
  s.cooldown_progress = 0;
  // a zero cooldown re-arms immediately
  s.phase = cfg.cooldown_period == 0 ? CounterPhase::kNoEvent : CounterPhase::kWaitingForNoEvent;
  return s;
}

}  // namespace

CounterState step(const CounterState& state, EventLabel pred, const CounterConfig& cfg) {
  if (pred != EventLabel::kEnter && pred != EventLabel::kExit && pred != EventLabel::kNoEvent) {
    throw std::invalid_argument("counter received unknown label " + std::to_string(static_cast<int>(pred)));
  }
  CounterState s = state;
  switch (state.phase) {
    case CounterPhase::kNoEvent:
      if (pred == EventLabel::kNoEvent) return s;
      if (cfg.event_threshold == 1) return confirm(s, pred, cfg);
      s.phase = CounterPhase::kDebouncing;
      s.buffered_event = pred;
      s.consecutive_count = 1;
      return s;
    case CounterPhase::kDebouncing:
      if (pred != *state.buffered_event) {
        s.phase = CounterPhase::kNoEvent;
        s.buffered_event.reset();
        s.consecutive_count = 0;
        return s;
      }
      if (++s.consecutive_count >= cfg.event_threshold) return confirm(s, pred, cfg);
      return s;
    case CounterPhase::kWaitingForNoEvent:
      if (pred != EventLabel::kNoEvent) {
        s.cooldown_progress = 0;
        return s;
      }
      if (++s.cooldown_progress >= cfg.cooldown_period) {
        s.phase = CounterPhase::kNoEvent;
        s.cooldown_progress = 0;
      }
      return s;
  }
  return s;
}

std::vector<int> OccupancyTrace::occupancy() const {
  std::vector<int> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.occupancy);
  return out;
}

OccupancyTrace run_trace(std::span<const EventLabel> preds, const CounterConfig& cfg, const CounterState& initial) {
  cfg.validate();
  OccupancyTrace trace;
  trace.entries.reserve(preds.size());
  CounterState s = initial;
  for (const auto p : preds) {
    s = step(s, p, cfg);
    trace.entries.push_back({p, s.phase, s.occupancy});
  }
  trace.final_state = s;
  return trace;
}

OccupancyTrace run_trace(std::span<const int> preds, const CounterConfig& cfg, const CounterState& initial) {
  std::vector<EventLabel> labels;
  labels.reserve(preds.size());
  for (const int p : preds) labels.push_back(event_from_index(p));
  return run_trace(std::span<const EventLabel>(labels), cfg, initial);
}

std::string trace_to_csv(const OccupancyTrace& trace) {
  std::string out = "window_index,prediction,phase,occupancy\n";
  for (std::size_t i = 0; i < trace.entries.size(); ++i) {
    const auto& e = trace.entries[i];
    out += std::to_string(i) + "," + std::string(to_string(e.prediction)) + "," +
           std::string(to_string(e.phase)) + "," + std::to_string(e.occupancy) + "\n";
  }
  return out;
}

}  // namespace csisense
