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

// CSI interchange files.
//
//   session.csv         timestamp,sc_0,...,sc_{C-1}   one row per packet
//   session.events.csv  timestamp,label               optional sidecar
//
// Reals are written in shortest round-trip form, so write -> read is exact.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "csisense/dsp.hpp"
#include "csisense/labels.hpp"

namespace csisense {

/// Malformed data file; the message carries the file and line number.
class DataFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CsiCsvOptions {
  std::size_t channels = 52;
  double sample_rate_hz = 100.0;
};

std::string format_real(double v);

/// Writes to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

std::string csi_to_csv(const CsiSeries& series);
std::string events_to_csv(const CsiSeries& series, const LabelSet& labels);

/// `origin` names the source in error messages.
CsiSeries csi_from_csv(std::string_view text, const CsiCsvOptions& opts, const std::string& origin = "<csv>");
std::vector<EventMark> events_from_csv(std::string_view text, const LabelSet& labels,
                                       const std::string& origin = "<events>");

/// Sidecar path for a session file: "a/b.csv" -> "a/b.events.csv".
std::filesystem::path events_path_for(const std::filesystem::path& csv_path);

/// Reads a session and, when present, its events sidecar.
CsiSeries load_dataset(const std::filesystem::path& csv_path, const CsiCsvOptions& opts,
                       const LabelSet& labels);
void save_dataset(const CsiSeries& series, const std::filesystem::path& csv_path, const LabelSet& labels);

}  // namespace csisense
