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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace csisense {

/// Doorway events. Values double as class indices of the 3-class head.
enum class EventLabel : int { kEnter = 0, kExit = 1, kNoEvent = 2 };

std::string_view to_string(EventLabel label);
/// Throws std::invalid_argument for anything but enter/exit/no_event.
EventLabel parse_event_label(std::string_view name);
EventLabel event_from_index(int index);

/// Ordered class names; a label is its index into `names`.
struct LabelSet {
  std::string name;
  std::vector<std::string> names;
  /// Index of the "nothing happening" class, when the set has one.
  std::optional<int> background;

  std::size_t size() const { return names.size(); }
  int index_of(std::string_view label) const;  // throws on unknown
  bool contains(int index) const { return index >= 0 && static_cast<std::size_t>(index) < names.size(); }

  static LabelSet doorway();  // enter, exit, no_event
  static LabelSet activity();  // six-class activity set
  static LabelSet by_name(std::string_view name);
};

}  // namespace csisense
