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

#include "csisense/csv_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace csisense {

namespace {

// Splits one line on commas; no quoting in these formats.
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    out.push_back(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(line_no, line);
  }
}

double parse_real(std::string_view field, const std::string& origin, std::size_t line_no) {
  double v = 0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end || field.empty()) {
    throw DataFormatError(origin + ":" + std::to_string(line_no) + ": cannot parse '" + std::string(field) +
                          "' as a real");
  }
  return v;
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, end);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string csi_to_csv(const CsiSeries& series) {
  series.validate();
  std::string out = "timestamp";
  for (std::size_t c = 0; c < series.channels; ++c) out += ",sc_" + std::to_string(c);
  out += '\n';
  for (std::size_t t = 0; t < series.length(); ++t) {
    out += format_real(series.timestamps[t]);
    for (std::size_t c = 0; c < series.channels; ++c) {
      out += ',';
      out += format_real(series.at(t, c));
    }
    out += '\n';
  }
  return out;
}

std::string events_to_csv(const CsiSeries& series, const LabelSet& labels) {
  std::string out = "timestamp,label\n";
  for (const auto& m : series.marks) {
    if (!labels.contains(m.label)) throw std::invalid_argument("event label index outside the label set");
    out += format_real(m.timestamp) + "," + labels.names[static_cast<std::size_t>(m.label)] + "\n";
  }
  return out;
}

CsiSeries csi_from_csv(std::string_view text, const CsiCsvOptions& opts, const std::string& origin) {
  CsiSeries s;
  s.channels = opts.channels;
  s.sample_rate_hz = opts.sample_rate_hz;
  bool header_seen = false;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (line.empty()) return;
    const auto fields = split_fields(line);
    const auto where = origin + ":" + std::to_string(line_no) + ": ";
    if (!header_seen) {
      header_seen = true;
      if (fields.size() != opts.channels + 1 || fields[0] != "timestamp") {
        throw DataFormatError(where + "header must be timestamp plus " + std::to_string(opts.channels) +
                              " subcarrier columns, found " + std::to_string(fields.size()) + " columns");
      }
      for (std::size_t c = 0; c < opts.channels; ++c) {
        if (fields[c + 1] != "sc_" + std::to_string(c)) {
          throw DataFormatError(where + "column " + std::to_string(c + 1) + " must be named sc_" + std::to_string(c));
        }
      }
      return;
    }
    if (fields.size() != opts.channels + 1) {
      throw DataFormatError(where + "expected " + std::to_string(opts.channels + 1) + " columns, found " +
                            std::to_string(fields.size()));
    }
    const double ts = parse_real(fields[0], origin, line_no);
    if (!s.timestamps.empty() && !(ts > s.timestamps.back())) {
      throw DataFormatError(where + "timestamp " + std::string(fields[0]) + " is not after the previous row");
    }
    s.timestamps.push_back(ts);
    for (std::size_t c = 0; c < opts.channels; ++c) s.amplitudes.push_back(parse_real(fields[c + 1], origin, line_no));
  });
  if (!header_seen) throw DataFormatError(origin + ": empty file");
  return s;
}

std::vector<EventMark> events_from_csv(std::string_view text, const LabelSet& labels, const std::string& origin) {
  std::vector<EventMark> marks;
  bool header_seen = false;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (line.empty()) return;
    const auto fields = split_fields(line);
    const auto where = origin + ":" + std::to_string(line_no) + ": ";
    if (!header_seen) {
      header_seen = true;
      if (fields.size() != 2 || fields[0] != "timestamp" || fields[1] != "label") {
        throw DataFormatError(where + "header must be 'timestamp,label'");
      }
      return;
    }
    if (fields.size() != 2) throw DataFormatError(where + "expected 2 columns, found " + std::to_string(fields.size()));
    EventMark m;
    m.timestamp = parse_real(fields[0], origin, line_no);
    try {
      m.label = labels.index_of(fields[1]);
    } catch (const std::invalid_argument&) {
      throw DataFormatError(where + "unknown label '" + std::string(fields[1]) + "' for label set " + labels.name);
    }
    if (!marks.empty() && m.timestamp < marks.back().timestamp) {
      throw DataFormatError(where + "event timestamps must be non-decreasing");
    }
    marks.push_back(m);
  });
  return marks;
}

std::filesystem::path events_path_for(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p.replace_extension(".events.csv");
  return p;
}

CsiSeries load_dataset(const std::filesystem::path& csv_path, const CsiCsvOptions& opts, const LabelSet& labels) {
  CsiSeries s = csi_from_csv(read_file(csv_path), opts, csv_path.string());
  s.source_id = csv_path.stem().string();
  const auto ev = events_path_for(csv_path);
  if (std::filesystem::exists(ev)) s.marks = events_from_csv(read_file(ev), labels, ev.string());
  s.validate();
  return s;
}

void save_dataset(const CsiSeries& series, const std::filesystem::path& csv_path, const LabelSet& labels) {
  write_file_atomic(csv_path, csi_to_csv(series));
  write_file_atomic(events_path_for(csv_path), events_to_csv(series, labels));
}

}  // namespace csisense
