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

#include "csisense/dsp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace csisense {

void CsiSeries::validate() const {
  if (channels == 0) throw std::invalid_argument("series has no subcarrier columns");
  if (!(sample_rate_hz > 0)) throw std::invalid_argument("sample rate must be positive");
  if (amplitudes.size() != timestamps.size() * channels) {
    throw std::invalid_argument("amplitude matrix has " + std::to_string(amplitudes.size()) +
                                " values, expected " + std::to_string(timestamps.size()) + " x " +
                                std::to_string(channels));
  }
  for (std::size_t i = 1; i < timestamps.size(); ++i) {
    if (!(timestamps[i] > timestamps[i - 1])) {
      throw std::invalid_argument("timestamps not strictly increasing at row " + std::to_string(i));
    }
  }
}

FilterSpec FilterSpec::make(int order, double cutoff_hz, double sample_rate_hz) {
  if (order < 2 || order % 2 != 0) {
    throw std::invalid_argument("Butterworth order must be even and >= 2, got " + std::to_string(order));
  }
  if (!(sample_rate_hz > 0)) throw std::invalid_argument("sample rate must be positive");
  FilterSpec spec;
  spec.order = order;
  spec.cutoff_hz = cutoff_hz;
  spec.sample_rate_hz = sample_rate_hz;
  spec.normalized_cutoff = cutoff_hz / (sample_rate_hz / 2.0);
  if (!(spec.normalized_cutoff > 0.0 && spec.normalized_cutoff < 1.0)) {
    throw std::invalid_argument("cutoff " + std::to_string(cutoff_hz) +
                                " Hz must lie strictly between 0 and Nyquist (" +
                                std::to_string(sample_rate_hz / 2.0) + " Hz)");
  }
  return spec;
}

std::complex<double> SosFilter::response(double freq_hz) const {
  const double w = 2.0 * std::numbers::pi * freq_hz / sample_rate_hz;
  const std::complex<double> z1 = std::polar(1.0, -w);
  const std::complex<double> z2 = z1 * z1;
  std::complex<double> h{1.0, 0.0};
  for (const auto& s : sections) {
    h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
  }
  return h;
}

std::string SosFilter::to_text() const {
  std::string out;
  char buf[64];
  auto put = [&](double v, char sep) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    out.append(buf, end);
    out.push_back(sep);
  };
  for (const auto& s : sections) {
    put(s.b0, ' ');
    put(s.b1, ' ');
    put(s.b2, ' ');
    put(1.0, ' ');
    put(s.a1, ' ');
    put(s.a2, '\n');
  }
  return out;
}

SosFilter design_butterworth(const FilterSpec& spec) {
  const auto checked = FilterSpec::make(spec.order, spec.cutoff_hz, spec.sample_rate_hz);
  // pre-warped analog cutoff for the bilinear map s = (z - 1) / (z + 1)
  const double k = std::tan(std::numbers::pi * checked.normalized_cutoff / 2.0);
  const double k2 = k * k;
  SosFilter f;
  f.sample_rate_hz = checked.sample_rate_hz;
  const int n = checked.order;
  for (int i = 0; i < n / 2; ++i) {
    // conjugate pole pair of the normalized prototype: s^2 + q s + 1
    const double q = 2.0 * std::sin(std::numbers::pi * (2.0 * i + 1.0) / (2.0 * n));
    const double norm = 1.0 / (1.0 + q * k + k2);
    Biquad s;
    s.b0 = k2 * norm;
    s.b1 = 2.0 * s.b0;
    s.b2 = s.b0;
    s.a1 = 2.0 * (k2 - 1.0) * norm;
    s.a2 = (1.0 - q * k + k2) * norm;
    f.sections.push_back(s);
  }
  return f;
}

namespace {

struct SectionState {
  double z1 = 0, z2 = 0;
};

// State each section would hold after an infinitely long run of x = level.
std::vector<SectionState> steady_state(const SosFilter& f, double level) {
  std::vector<SectionState> zi(f.sections.size());
  double in = level;
  for (std::size_t i = 0; i < f.sections.size(); ++i) {
    const auto& s = f.sections[i];
    const double out = in * (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
    zi[i].z2 = s.b2 * in - s.a2 * out;
    zi[i].z1 = s.b1 * in - s.a1 * out + zi[i].z2;
    in = out;
  }
  return zi;
}

void run_sos(const SosFilter& f, std::vector<double>& x) {
  if (x.empty()) return;
  auto zi = steady_state(f, x.front());
  for (std::size_t si = 0; si < f.sections.size(); ++si) {
    const auto& s = f.sections[si];
    double z1 = zi[si].z1, z2 = zi[si].z2;
    for (auto& v : x) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
}

}  // namespace

std::vector<double> filter_signal(std::span<const double> x, const SosFilter& filter, int order,
                                  FilterMode mode) {
  const std::size_t pad = static_cast<std::size_t>(3 * order);
  if (x.size() <= pad) {
    throw std::invalid_argument("series of length " + std::to_string(x.size()) +
                                " is too short to filter (need more than " + std::to_string(pad) + ")");
  }
  if (mode == FilterMode::kCausal) {
    std::vector<double> y(x.begin(), x.end());
    run_sos(filter, y);
    return y;
  }
  const std::size_t n = x.size();
  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);
  run_sos(filter, ext);
  std::reverse(ext.begin(), ext.end());
  run_sos(filter, ext);
  std::reverse(ext.begin(), ext.end());
  return {ext.begin() + static_cast<std::ptrdiff_t>(pad), ext.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

CsiSeries apply_lowpass(const CsiSeries& series, const FilterSpec& spec, FilterMode mode) {
  series.validate();
  const auto filter = design_butterworth(spec);
  CsiSeries out = series;
  const std::size_t T = series.length(), C = series.channels;
  if (T <= static_cast<std::size_t>(3 * spec.order)) {
    throw std::invalid_argument("series of length " + std::to_string(T) + " is too short to filter");
  }
#pragma omp parallel for schedule(static)
  for (std::int64_t ci = 0; ci < static_cast<std::int64_t>(C); ++ci) {
    const auto c = static_cast<std::size_t>(ci);
    std::vector<double> col(T);
    for (std::size_t t = 0; t < T; ++t) col[t] = series.amplitudes[t * C + c];
    const auto y = filter_signal(col, filter, spec.order, mode);
    for (std::size_t t = 0; t < T; ++t) out.amplitudes[t * C + c] = y[t];
  }
  return out;
}

std::vector<Window> segment_windows(const CsiSeries& series, std::size_t window_len, std::size_t step) {
  if (window_len == 0 || step == 0) throw std::invalid_argument("window length and step must be >= 1");
  const std::size_t count = window_count(series.length(), window_len, step);
  const std::size_t C = series.channels;
  std::vector<Window> windows;
  windows.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Window w;
    w.length = window_len;
    w.channels = C;
    w.start_index = i * step;
    w.source_id = series.source_id;
    w.values.resize(window_len * C);
    const double* src = series.amplitudes.data() + w.start_index * C;
    for (std::size_t j = 0; j < window_len * C; ++j) w.values[j] = static_cast<float>(src[j]);
    windows.push_back(std::move(w));
  }
  return windows;
}

std::vector<LabeledWindow> purify_labels(const std::vector<Window>& windows,
                                         const CsiSeries& series, double event_span_s,
                                         std::size_t num_classes, std::optional<int> background) {
  const double dt = 1.0 / series.sample_rate_hz;
  // overlaps shorter than half a sample are timestamp rounding, not contact
  const double min_overlap = 0.5 * dt;
  std::vector<LabeledWindow> out;
  for (const auto& w : windows) {
    const double start = series.timestamps.at(w.start_index);
    const double end = start + static_cast<double>(w.length) * dt;
    std::set<int> seen;
    for (const auto& m : series.marks) {
      const double lo = std::max(start, m.timestamp - event_span_s);
      const double hi = std::min(end, m.timestamp + event_span_s);
      if (hi - lo > min_overlap) seen.insert(m.label);
    }
    int label = 0;
    if (seen.empty()) {
      if (!background) continue;
      label = *background;
    } else if (seen.size() == 1) {
      label = *seen.begin();
    } else {
      continue;
    }
    if (label < 0 || static_cast<std::size_t>(label) >= num_classes) continue;
    out.push_back({w, label});
  }
  return out;
}

std::vector<int> occupancy_from_marks(const CsiSeries& series, const std::vector<Window>& windows,
                                      int enter_label, int exit_label) {
  const double dt = 1.0 / series.sample_rate_hz;
  std::vector<int> out;
  out.reserve(windows.size());
  for (const auto& w : windows) {
    const double centre = series.timestamps.at(w.start_index) + 0.5 * static_cast<double>(w.length) * dt;
    int occ = 0;
    for (const auto& m : series.marks) {
      if (m.timestamp > centre + 0.5 * dt) continue;
      if (m.label == enter_label) ++occ;
      if (m.label == exit_label) --occ;
    }
    out.push_back(occ);
  }
  return out;
}

PreparedSession prepare_session(const CsiSeries& raw, const PreprocessOptions& opts) {
  PreparedSession s;
  s.filtered = apply_lowpass(raw, opts.filter, opts.mode);
  s.windows = segment_windows(s.filtered, opts.window_len, opts.step);
  s.labeled = purify_labels(s.windows, s.filtered, opts.event_span_s, opts.num_classes, opts.background);
  return s;
}

}  // namespace csisense
