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

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "csisense/dsp.hpp"

using namespace csisense;

namespace {

CsiSeries make_series(std::size_t length, std::size_t channels, double fs = 100.0) {
  CsiSeries s;
  s.channels = channels;
  s.sample_rate_hz = fs;
  for (std::size_t t = 0; t < length; ++t) s.timestamps.push_back(1000.0 + t / fs);
  s.amplitudes.assign(length * channels, 0.0);
  return s;
}

double rms(std::span<const double> x, std::size_t skip) {
  double acc = 0;
  for (std::size_t i = skip; i < x.size() - skip; ++i) acc += x[i] * x[i];
  return std::sqrt(acc / static_cast<double>(x.size() - 2 * skip));
}

std::vector<double> sine(std::size_t n, double freq, double fs) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::sin(2 * std::numbers::pi * freq * i / fs);
  return x;
}

}  // namespace

TEST_CASE("butterworth design hits the response targets") {
  const auto spec = FilterSpec::make(4, 8.0, 100.0);
  CHECK(spec.normalized_cutoff == 0.16);
  const auto f = design_butterworth(spec);
  CHECK(f.sections.size() == 2);
  CHECK(f.magnitude(0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(f.magnitude(8.0) - std::sqrt(0.5)) < 1e-3);
  CHECK(f.magnitude(40.0) < 0.01);
}

TEST_CASE("filter spec rejects bad inputs") {
  CHECK_THROWS_AS(FilterSpec::make(4, 0.0, 100.0), std::invalid_argument);
  CHECK_THROWS_AS(FilterSpec::make(4, 50.0, 100.0), std::invalid_argument);
  CHECK_THROWS_AS(FilterSpec::make(3, 8.0, 100.0), std::invalid_argument);
}

TEST_CASE("filtering constants, passband and stopband") {
  const auto spec = FilterSpec::make(4, 8.0, 100.0);
  const auto f = design_butterworth(spec);
  for (FilterMode mode : {FilterMode::kZeroPhase, FilterMode::kCausal}) {
    const std::vector<double> c(300, 2.5);
    for (double v : filter_signal(c, f, 4, mode)) CHECK(v == doctest::Approx(2.5).epsilon(1e-9));
  }
  const auto low = sine(2000, 2.0, 100.0);
  const auto high = sine(2000, 30.0, 100.0);
  const double low_gain = rms(filter_signal(low, f, 4, FilterMode::kZeroPhase), 200) / rms(low, 200);
  const double high_gain = rms(filter_signal(high, f, 4, FilterMode::kZeroPhase), 200) / rms(high, 200);
  CHECK(std::abs(low_gain - 1.0) < 0.02);
  CHECK(high_gain < 0.05);
}

TEST_CASE("zero-phase filtering does not shift a symmetric pulse") {
  const auto f = design_butterworth(FilterSpec::make(4, 8.0, 100.0));
  std::vector<double> x(401, 0.0);
  for (int i = -20; i <= 20; ++i) x[200 + i] = 1.0;
  const auto y = filter_signal(x, f, 4, FilterMode::kZeroPhase);
  for (int i = 1; i < 100; ++i) CHECK(y[200 - i] == doctest::Approx(y[200 + i]).epsilon(1e-6));
}

TEST_CASE("apply_lowpass filters every column independently") {
  auto s = make_series(300, 2);
  const auto wave = sine(300, 30.0, 100.0);
  for (std::size_t t = 0; t < 300; ++t) {
    s.amplitudes[t * 2] = 1.0;
    s.amplitudes[t * 2 + 1] = wave[t];
  }
  const auto out = apply_lowpass(s, FilterSpec::make(4, 8.0, 100.0));
  REQUIRE(out.length() == 300);
  for (std::size_t t = 0; t < 300; ++t) CHECK(out.at(t, 0) == doctest::Approx(1.0).epsilon(1e-9));
  double peak = 0;
  for (std::size_t t = 50; t < 250; ++t) peak = std::max(peak, std::abs(out.at(t, 1)));
  CHECK(peak < 0.05);
}

TEST_CASE("segmentation counts and offsets") {
  CHECK(segment_windows(make_series(200, 1)).size() == 3);
  CHECK(segment_windows(make_series(100, 1)).size() == 1);
  CHECK(segment_windows(make_series(99, 1)).empty());
  CHECK(window_count(249, 100, 50) == 3);
  auto s = make_series(200, 2);
  for (std::size_t i = 0; i < s.amplitudes.size(); ++i) s.amplitudes[i] = static_cast<double>(i);
  const auto ws = segment_windows(s, 100, 50);
  REQUIRE(ws.size() == 3);
  CHECK(ws[1].start_index == 50);
  CHECK(ws[1].at(0, 1) == 101.0f);
  CHECK(ws[2].at(99, 0) == 398.0f);
}

TEST_CASE("label purification") {
  // 10 s at 100 Hz: windows start at 0, 0.5, ..., 9.0 s.
  auto s = make_series(1000, 1);
  const double t0 = s.timestamps.front();
  const auto ws = segment_windows(s, 100, 50);
  REQUIRE(ws.size() == 19);

  SUBCASE("no marks gives background everywhere") {
    const auto lw = purify_labels(ws, s, 2.0, 3, 2);
    CHECK(lw.size() == 19);
    for (const auto& w : lw) CHECK(w.label == 2);
  }
  SUBCASE("no background drops unlabeled windows") {
    s.marks = {{t0 + 5.0, 0}};
    const auto lw = purify_labels(ws, s, 0.2, 3, std::nullopt);
    for (const auto& w : lw) CHECK(w.label == 0);
    CHECK(lw.size() < ws.size());
  }
  SUBCASE("one mark labels the overlapping windows") {
    s.marks = {{t0 + 5.0, 0}};
    const auto lw = purify_labels(ws, s, 2.0, 3, 2);
    CHECK(lw.size() == 19);
    // Span [3, 7): windows starting at 2.5 .. 6.5 s overlap it.
    for (const auto& w : lw) {
      const double start = w.window.start_index / 100.0;
      CHECK(w.label == ((start > 2.0 && start < 7.0) ? 0 : 2));
    }
  }
  SUBCASE("windows touching two labels are dropped") {
    s.marks = {{t0 + 3.0, 0}, {t0 + 6.0, 1}};
    const auto lw = purify_labels(ws, s, 1.5, 3, 2);
    // Spans [1.5, 4.5) and [4.5, 7.5): only the window starting at 4.0 s touches both.
    CHECK(lw.size() == ws.size() - 1);
    for (const auto& w : lw) CHECK(w.window.start_index != 400);
  }
  SUBCASE("out-of-range labels make windows unusable") {
    s.marks = {{t0 + 5.0, 7}};
    const auto lw = purify_labels(ws, s, 0.5, 3, 2);
    for (const auto& w : lw) CHECK(w.label == 2);
    CHECK(lw.size() < ws.size());
  }
}

TEST_CASE("occupancy follows marks at window centres") {
  auto s = make_series(1000, 1);
  const double t0 = s.timestamps.front();
  s.marks = {{t0 + 2.0, 0}, {t0 + 6.0, 1}};
  const auto ws = segment_windows(s, 100, 50);
  const auto occ = occupancy_from_marks(s, ws, 0, 1);
  REQUIRE(occ.size() == ws.size());
  for (std::size_t i = 0; i < ws.size(); ++i) {
    const double centre = ws[i].start_index / 100.0 + 0.5;
    CHECK(occ[i] == ((centre >= 2.0 && centre < 6.0) ? 1 : 0));
  }
}

TEST_CASE("series validation") {
  auto s = make_series(10, 2);
  CHECK_NOTHROW(s.validate());
  s.amplitudes.pop_back();
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  auto t = make_series(10, 1);
  t.timestamps[5] = t.timestamps[4];
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
}
