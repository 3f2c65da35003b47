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

// CSI amplitude preprocessing: Butterworth low-pass design and filtering,
// sliding-window segmentation and label purification.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace csisense {

struct EventMark {
  double timestamp = 0.0;  // UNIX seconds
  int label = 0;           // index into the active LabelSet
};

/// T x C amplitude matrix (row-major, one row per packet).
struct CsiSeries {
  std::string source_id;
  double sample_rate_hz = 100.0;
  std::size_t channels = 52;
  std::vector<double> timestamps;
  std::vector<double> amplitudes;
  std::vector<EventMark> marks;

  std::size_t length() const { return timestamps.size(); }
  double at(std::size_t t, std::size_t c) const { return amplitudes[t * channels + c]; }
  /// Throws std::invalid_argument when the row count, channel count or
  /// timestamp ordering is inconsistent.
  void validate() const;
};

struct FilterSpec {
  int order = 4;
  double cutoff_hz = 8.0;
  double sample_rate_hz = 100.0;
  double normalized_cutoff = 0.16;  // cutoff / Nyquist

  /// Validates and fills normalized_cutoff; throws when the cutoff is not
  /// strictly between 0 and Nyquist or the order is not even and >= 2.
  static FilterSpec make(int order, double cutoff_hz, double sample_rate_hz);
};

/// Direct-form II transposed biquad, a0 normalized to 1.
struct Biquad {
  double b0 = 1, b1 = 0, b2 = 0;
  double a1 = 0, a2 = 0;
};

struct SosFilter {
  std::vector<Biquad> sections;
  double sample_rate_hz = 100.0;

  std::complex<double> response(double freq_hz) const;
  double magnitude(double freq_hz) const { return std::abs(response(freq_hz)); }
  /// One line per section: "b0 b1 b2 1 a1 a2", full round-trip precision.
  std::string to_text() const;
};

/// Digital Butterworth low-pass via bilinear transform with pre-warping.
SosFilter design_butterworth(const FilterSpec& spec);

enum class FilterMode { kZeroPhase, kCausal };

/// Filters every subcarrier column independently. Both modes start from the
/// steady-state filter state for the first sample, so constant input passes
/// unchanged. Zero-phase pads each end with an odd reflection of 3*order
/// samples and runs forward then backward.
CsiSeries apply_lowpass(const CsiSeries& series, const FilterSpec& spec,
                        FilterMode mode = FilterMode::kZeroPhase);

/// Single-column form of apply_lowpass.
std::vector<double> filter_signal(std::span<const double> x, const SosFilter& filter, int order,
                                  FilterMode mode);

/// W x C window, time-major like CsiSeries.
struct Window {
  std::size_t length = 0;
  std::size_t channels = 0;
  std::vector<float> values;
  std::size_t start_index = 0;
  std::string source_id;

  float at(std::size_t t, std::size_t c) const { return values[t * channels + c]; }
};

struct LabeledWindow {
  Window window;
  int label = 0;
};

/// Windows at offsets 0, step, 2*step, ...; a trailing partial window is
/// dropped. Returns an empty list when the series is shorter than window_len.
std::vector<Window> segment_windows(const CsiSeries& series, std::size_t window_len = 100,
                                    std::size_t step = 50);

inline std::size_t window_count(std::size_t length, std::size_t window_len, std::size_t step) {
  return length < window_len ? 0 : (length - window_len) / step + 1;
}

/// Labels each window from the event marks. A mark covers
/// [timestamp - span, timestamp + span). Windows overlapping marks of one
/// label get that label; overlapping none get `background` (or are dropped
/// if there is none); overlapping two or more labels are dropped. Marks whose
/// label is not below `num_classes` make a window unusable.
std::vector<LabeledWindow> purify_labels(const std::vector<Window>& windows,
                                         const CsiSeries& series, double event_span_s,
                                         std::size_t num_classes, std::optional<int> background);

/// Occupancy after each window: enters minus exits among marks at or before
/// the window centre (half a sample of slack absorbs timestamp rounding).
std::vector<int> occupancy_from_marks(const CsiSeries& series, const std::vector<Window>& windows,
                                      int enter_label, int exit_label);

struct PreprocessOptions {
  FilterSpec filter;
  FilterMode mode = FilterMode::kZeroPhase;
  std::size_t window_len = 100;
  std::size_t step = 50;
  double event_span_s = 2.0;
  std::size_t num_classes = 3;
  std::optional<int> background = 2;
};

/// One session after filtering, segmentation and labelling. `windows` keeps
/// every window in time order (counting needs the unbroken sequence);
/// `labeled` holds the ones that survived purification.
struct PreparedSession {
  CsiSeries filtered;
  std::vector<Window> windows;
  std::vector<LabeledWindow> labeled;
};

PreparedSession prepare_session(const CsiSeries& raw, const PreprocessOptions& opts);

}  // namespace csisense
