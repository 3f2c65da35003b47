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

// Seeded synthetic doorway sessions. Each event is a localized chirp burst
// whose sweep direction and subcarrier weighting differ between enter and
// exit; a domain profile applies an affine amplitude change and its own
// noise level.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "csisense/dsp.hpp"
#include "csisense/labels.hpp"
#include "csisense/random.hpp"

namespace csisense {

struct DomainProfile {
  int id = 0;
  std::vector<double> baseline;  // per subcarrier, before the affine change
  double gain = 1.0;
  double offset = 0.0;
  double noise_std = 0.05;
  double burst_amplitude = 0.5;
  double chirp_low_hz = 1.0;
  double chirp_high_hz = 5.0;
  double burst_half_width_s = 2.0;
  double edge_s = 0.2;  // raised-cosine ramp at each end of a burst
  double sample_rate_hz = 100.0;

  /// Profile 0 is the reference room; profile 1 scales amplitudes by 1.4,
  /// adds 0.6 and uses noise std 0.07. Baselines come from `seed` and are
  /// shared by all profiles.
  static DomainProfile make(int id, std::size_t channels = 52, std::uint64_t seed = 1);
  std::size_t channels() const { return baseline.size(); }
};

struct ScriptedEvent {
  double time_s = 0;
  EventLabel label = EventLabel::kEnter;
};

struct ScenarioScript {
  std::string id = "session";
  double duration_s = 60.0;
  double start_time = 1.7e9;  // UNIX seconds of the first sample
  double min_gap_s = 15.0;
  int profile_id = 0;
  std::vector<ScriptedEvent> events;

  /// Events sorted, at least min_gap_s apart, bursts inside the session and
  /// occupancy never negative; throws std::invalid_argument otherwise.
  void validate(double burst_half_width_s = 2.0) const;

  /// `n_events` events on whole seconds. The first is an enter; an exit is
  /// drawn only while someone is inside, and the last event is forced to be
  /// an exit if none occurred, so every script holds both event types when
  /// n_events >= 2.
  static ScenarioScript random(std::string id, double duration_s, std::size_t n_events, double min_gap_s,
                               int profile_id, Rng& rng, double burst_half_width_s = 2.0);
};

/// Baseline + burst signatures, then the profile's affine change and
/// Gaussian noise. Marks carry doorway label indices.
CsiSeries generate_series(const ScenarioScript& script, const DomainProfile& profile, std::uint64_t seed);

struct SynthOptions {
  double duration_s = 60.0;
  std::size_t events_per_script = 3;
  double min_gap_s = 15.0;
  PreprocessOptions preprocess;
};

struct SynthSession {
  ScenarioScript script;
  CsiSeries raw;
  PreparedSession prepared;
  std::vector<int> occupancy;  // truth per window of prepared.windows
};

struct SynthDataset {
  std::vector<SynthSession> train, val, test;
  std::array<std::size_t, 3> train_class_counts{};  // enter, exit, no_event
};

/// Generates n_scripts sessions and assigns whole sessions to train/val/test
/// per `ratios` (shuffled by seed). Ratios must be >= 0, sum to 1, and give
/// the training split at least one session.
SynthDataset generate_dataset(std::size_t n_scripts, const DomainProfile& profile, std::array<double, 3> ratios,
                              std::uint64_t seed, const SynthOptions& opts = {});

std::vector<LabeledWindow> labeled_windows(const std::vector<SynthSession>& sessions);
std::vector<Window> all_windows(const std::vector<SynthSession>& sessions);

}  // namespace csisense
