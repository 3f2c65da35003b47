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

#include "csisense/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace csisense {

DomainProfile DomainProfile::make(int id, std::size_t channels, std::uint64_t seed) {
  if (channels < 2) throw std::invalid_argument("profile needs at least two subcarriers");
  DomainProfile p;
  p.id = id;
  Rng rng(seed);
  std::uniform_real_distribution<double> base(0.8, 1.2);
  p.baseline.resize(channels);
  for (auto& b : p.baseline) b = base(rng);
  switch (id) {
    case 0:
      break;
    case 1:
      p.gain = 1.4;
      p.offset = 0.6;
      p.noise_std = 0.07;
      break;
    default:
      throw std::invalid_argument("unknown domain profile " + std::to_string(id));
  }
  return p;
}

void ScenarioScript::validate(double burst_half_width_s) const {
  if (!(duration_s > 0)) throw std::invalid_argument("script duration must be > 0");
  int occupancy = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    if (e.label != EventLabel::kEnter && e.label != EventLabel::kExit) {
      throw std::invalid_argument("scripted events must be enter or exit");
    }
    if (e.time_s - burst_half_width_s < 0 || e.time_s + burst_half_width_s > duration_s) {
      throw std::invalid_argument("event at " + std::to_string(e.time_s) + " s does not fit inside the session");
    }
    if (i > 0 && e.time_s - events[i - 1].time_s < min_gap_s) {
      throw std::invalid_argument("events at " + std::to_string(events[i - 1].time_s) + " s and " +
                                  std::to_string(e.time_s) + " s are closer than the minimum gap");
    }
    occupancy += e.label == EventLabel::kEnter ? 1 : -1;
    if (occupancy < 0) throw std::invalid_argument("script drives occupancy below zero");
  }
}

ScenarioScript ScenarioScript::random(std::string id, double duration_s, std::size_t n_events, double min_gap_s,
                                      int profile_id, Rng& rng, double burst_half_width_s) {
  ScenarioScript s;
  s.id = std::move(id);
  s.duration_s = duration_s;
  s.min_gap_s = min_gap_s;
  s.profile_id = profile_id;
  if (n_events == 0) return s;
  // place events on whole seconds: spread the slack uniformly among gaps
  const int lo = static_cast<int>(std::ceil(burst_half_width_s)) + 2;
  const int hi = static_cast<int>(std::floor(duration_s - burst_half_width_s)) - 2;
  const int gap = static_cast<int>(std::ceil(min_gap_s));
  const int slack = hi - lo - gap * static_cast<int>(n_events - 1);
  if (slack < 0) throw std::invalid_argument("cannot fit " + std::to_string(n_events) + " events in the session");
  std::uniform_int_distribution<int> pick(0, slack);
  std::vector<int> cuts(n_events);
  for (auto& c : cuts) c = pick(rng);
  std::sort(cuts.begin(), cuts.end());
  int occupancy = 0;
  bool saw_exit = false;
  std::bernoulli_distribution coin(0.5);
  for (std::size_t i = 0; i < n_events; ++i) {
    ScriptedEvent e;
    e.time_s = lo + cuts[i] + gap * static_cast<int>(i);
    const bool last = i + 1 == n_events;
    if (occupancy == 0) {
      e.label = EventLabel::kEnter;
    } else if (last && !saw_exit) {
      e.label = EventLabel::kExit;
    } else {
      e.label = coin(rng) ? EventLabel::kExit : EventLabel::kEnter;
    }
    occupancy += e.label == EventLabel::kEnter ? 1 : -1;
    saw_exit = saw_exit || e.label == EventLabel::kExit;
    s.events.push_back(e);
  }
  s.validate(burst_half_width_s);
  return s;
}

namespace {

double envelope(double tau, double width, double edge) {
  if (tau < 0 || tau >= width) return 0.0;
  if (tau < edge) return 0.5 * (1.0 - std::cos(std::numbers::pi * tau / edge));
  if (width - tau < edge) return 0.5 * (1.0 - std::cos(std::numbers::pi * (width - tau) / edge));
  return 1.0;
}

}  // namespace

CsiSeries generate_series(const ScenarioScript& script, const DomainProfile& profile, std::uint64_t seed) {
  script.validate(profile.burst_half_width_s);
  if (!(profile.chirp_high_hz < profile.sample_rate_hz / 2)) throw std::invalid_argument("chirp above Nyquist");
  const std::size_t C = profile.channels();
  const double fs = profile.sample_rate_hz;
  const auto T = static_cast<std::size_t>(std::llround(script.duration_s * fs));
  CsiSeries s;
  s.source_id = script.id;
  s.sample_rate_hz = fs;
  s.channels = C;
  s.timestamps.resize(T);
  s.amplitudes.resize(T * C);
  for (std::size_t t = 0; t < T; ++t) s.timestamps[t] = script.start_time + static_cast<double>(t) / fs;

  const double width = 2.0 * profile.burst_half_width_s;
  const double sweep = profile.chirp_high_hz - profile.chirp_low_hz;
  Rng rng(seed);
  std::normal_distribution<double> noise(0.0, profile.noise_std);
  for (std::size_t t = 0; t < T; ++t) {
    const double time = static_cast<double>(t) / fs;
    double* row = s.amplitudes.data() + t * C;
    for (std::size_t c = 0; c < C; ++c) row[c] = profile.baseline[c];
    for (const auto& e : script.events) {
      const double tau = time - (e.time_s - profile.burst_half_width_s);
      const double env = envelope(tau, width, profile.edge_s);
      if (env == 0.0) continue;
      const bool enter = e.label == EventLabel::kEnter;
      // up-sweep for enter, down-sweep for exit
      const double phase = enter ? 2 * std::numbers::pi * (profile.chirp_low_hz * tau + sweep * tau * tau / (2 * width))
                                 : 2 * std::numbers::pi * (profile.chirp_high_hz * tau - sweep * tau * tau / (2 * width));
      for (std::size_t c = 0; c < C; ++c) {
        const double frac = static_cast<double>(c) / static_cast<double>(C - 1);
        const double weight = enter ? 0.2 + 0.8 * frac : 1.0 - 0.8 * frac;
        row[c] += profile.burst_amplitude * env * weight * std::sin(phase + 0.15 * static_cast<double>(c));
      }
    }
    for (std::size_t c = 0; c < C; ++c) row[c] = profile.gain * row[c] + profile.offset + noise(rng);
  }
  for (const auto& e : script.events) {
    s.marks.push_back({script.start_time + e.time_s, static_cast<int>(e.label)});
  }
  return s;
}

SynthDataset generate_dataset(std::size_t n_scripts, const DomainProfile& profile, std::array<double, 3> ratios,
                              std::uint64_t seed, const SynthOptions& opts) {
  double total = 0;
  for (double r : ratios) {
    if (!(r >= 0)) throw std::invalid_argument("split ratios must be >= 0");
    total += r;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("split ratios must sum to 1");
  const auto n_train = static_cast<std::size_t>(std::llround(ratios[0] * static_cast<double>(n_scripts)));
  const auto n_val = static_cast<std::size_t>(std::llround(ratios[1] * static_cast<double>(n_scripts)));
  if (n_train == 0 || n_train + n_val > n_scripts) {
    throw std::invalid_argument("split ratios leave the training split empty or overflow the script count");
  }

  std::vector<SynthSession> sessions(n_scripts);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(n_scripts); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    Rng rng(derive_seed(seed, 2 * i));
    char id[32];
    std::snprintf(id, sizeof id, "p%d_s%03zu", profile.id, i);
    auto& s = sessions[i];
    s.script = ScenarioScript::random(id, opts.duration_s, opts.events_per_script, opts.min_gap_s, profile.id, rng,
                                      profile.burst_half_width_s);
    s.script.start_time = 1.7e9 + 1000.0 * static_cast<double>(i);
    s.raw = generate_series(s.script, profile, derive_seed(seed, 2 * i + 1));
    s.prepared = prepare_session(s.raw, opts.preprocess);
    s.occupancy = occupancy_from_marks(s.prepared.filtered, s.prepared.windows,
                                       static_cast<int>(EventLabel::kEnter), static_cast<int>(EventLabel::kExit));
  }

  std::vector<std::size_t> order(n_scripts);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng shuffle_rng(derive_seed(seed, 0xA5A5));
  std::shuffle(order.begin(), order.end(), shuffle_rng);
  std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::sort(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  std::sort(order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), order.end());

  SynthDataset ds;
  for (std::size_t k = 0; k < n_scripts; ++k) {
    auto& dst = k < n_train ? ds.train : (k < n_train + n_val ? ds.val : ds.test);
    dst.push_back(std::move(sessions[order[k]]));
  }
  for (const auto& s : ds.train)
    for (const auto& lw : s.prepared.labeled) ++ds.train_class_counts.at(static_cast<std::size_t>(lw.label));
  return ds;
}

std::vector<LabeledWindow> labeled_windows(const std::vector<SynthSession>& sessions) {
  std::vector<LabeledWindow> out;
  for (const auto& s : sessions) out.insert(out.end(), s.prepared.labeled.begin(), s.prepared.labeled.end());
  return out;
}

std::vector<Window> all_windows(const std::vector<SynthSession>& sessions) {
  std::vector<Window> out;
  for (const auto& s : sessions) out.insert(out.end(), s.prepared.windows.begin(), s.prepared.windows.end());
  return out;
}

}  // namespace csisense
