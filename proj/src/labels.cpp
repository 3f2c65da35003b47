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

#include "csisense/labels.hpp"

#include <stdexcept>

namespace csisense {

std::string_view to_string(EventLabel label) {
  switch (label) {
    case EventLabel::kEnter: return "enter";
    case EventLabel::kExit: return "exit";
    case EventLabel::kNoEvent: return "no_event";
  }
  throw std::invalid_argument("unknown event label");
}

EventLabel parse_event_label(std::string_view name) {
  if (name == "enter") return EventLabel::kEnter;
  if (name == "exit") return EventLabel::kExit;
  if (name == "no_event") return EventLabel::kNoEvent;
  throw std::invalid_argument("unknown event label '" + std::string(name) + "'");
}

EventLabel event_from_index(int index) {
  if (index < 0 || index > 2) {
    throw std::invalid_argument("event class index out of range: " + std::to_string(index));
  }
  return static_cast<EventLabel>(index);
}

int LabelSet::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == label) return static_cast<int>(i);
  }
  throw std::invalid_argument("label '" + std::string(label) + "' is not in label set " + name);
}

LabelSet LabelSet::doorway() { return {"doorway", {"enter", "exit", "no_event"}, 2}; }

LabelSet LabelSet::activity() {
  return {"activity", {"walk", "forward_kick", "side_kick", "sit_down", "squat", "bend"}, std::nullopt};
}

LabelSet LabelSet::by_name(std::string_view name) {
  if (name == "doorway") return doorway();
  if (name == "activity") return activity();
  throw std::invalid_argument("unknown label set '" + std::string(name) + "'");
}

}  // namespace csisense
