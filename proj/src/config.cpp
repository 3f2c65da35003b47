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

#include "csisense/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "csisense/labels.hpp"

namespace csisense {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename N>
N parse_number(std::string_view key, std::string_view v) {
  N out{};
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("key '" + std::string(key) + "': cannot parse '" + std::string(v) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("key '" + std::string(key) + "': expected true/false, got '" + std::string(v) + "'");
}

template <typename N>
std::vector<N> parse_list(std::string_view key, std::string_view v) {
  std::vector<N> out;
  std::size_t pos = 0;
  while (pos <= v.size()) {
    const auto comma = v.find(',', pos);
    const auto item = trim(v.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    out.push_back(parse_number<N>(key, item));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string fmt(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, end);
}
template <typename N>
std::string fmt_list(const std::vector<N>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_floating_point_v<N>) {
      out += fmt(xs[i]);
    } else {
      out += std::to_string(xs[i]);
    }
  }
  return out;
}

struct Field {
  std::function<void(RunConfig&, std::string_view key, std::string_view value)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename M>
Field field(M RunConfig::*member) {
  using V = std::remove_cvref_t<decltype(std::declval<RunConfig&>().*member)>;
  Field f;
  f.set = [member](RunConfig& c, std::string_view k, std::string_view v) {
    if constexpr (std::is_same_v<V, bool>) {
      c.*member = parse_bool(k, v);
    } else if constexpr (std::is_same_v<V, std::string>) {
      c.*member = std::string(v);
    } else if constexpr (std::is_same_v<V, std::vector<std::size_t>> || std::is_same_v<V, std::vector<double>>) {
      c.*member = parse_list<typename V::value_type>(k, v);
    } else {
      c.*member = parse_number<V>(k, v);
    }
  };
  f.get = [member](const RunConfig& c) -> std::string {
    const auto& v = c.*member;
    if constexpr (std::is_same_v<V, bool>) {
      return v ? "true" : "false";
    } else if constexpr (std::is_same_v<V, std::string>) {
      return v;
    } else if constexpr (std::is_same_v<V, std::vector<std::size_t>> || std::is_same_v<V, std::vector<double>>) {
      return fmt_list(v);
    } else if constexpr (std::is_floating_point_v<V>) {
      return fmt(v);
    } else {
      return std::to_string(v);
    }
  };
  return f;
}

const std::vector<std::pair<std::string, Field>>& registry() {
  static const std::vector<std::pair<std::string, Field>> fields = {
      {"config.version", field(&RunConfig::version)},
      {"seed", field(&RunConfig::seed)},
      {"data.label_set", field(&RunConfig::label_set)},
      {"data.channels", field(&RunConfig::channels)},
      {"data.sample_rate_hz", field(&RunConfig::sample_rate_hz)},
      {"filter.order", field(&RunConfig::filter_order)},
      {"filter.cutoff_hz", field(&RunConfig::filter_cutoff_hz)},
      {"filter.mode", field(&RunConfig::filter_mode)},
      {"window.length", field(&RunConfig::window_length)},
      {"window.step", field(&RunConfig::window_step)},
      {"label.event_span_s", field(&RunConfig::event_span_s)},
      {"augment.jitter_sigma", field(&RunConfig::jitter_sigma)},
      {"augment.scale_sigma", field(&RunConfig::scale_sigma)},
      {"augment.max_segments", field(&RunConfig::max_segments)},
      {"model.layer_channels", field(&RunConfig::layer_channels)},
      {"model.blocks_per_layer", field(&RunConfig::blocks_per_layer)},
      {"model.se_reduction", field(&RunConfig::se_reduction)},
      {"model.adapter_bottleneck", field(&RunConfig::adapter_bottleneck)},
      {"model.embedding_dim", field(&RunConfig::embedding_dim)},
      {"model.se_enabled", field(&RunConfig::se_enabled)},
      {"model.adapters_enabled", field(&RunConfig::adapters_enabled)},
      {"model.projection_hidden", field(&RunConfig::projection_hidden)},
      {"model.projection_dim", field(&RunConfig::projection_dim)},
      {"model.discriminator_hidden", field(&RunConfig::discriminator_hidden)},
      {"pretrain.epochs", field(&RunConfig::pretrain_epochs)},
      {"pretrain.batch_size", field(&RunConfig::pretrain_batch_size)},
      {"pretrain.lr", field(&RunConfig::pretrain_lr)},
      {"pretrain.temperature", field(&RunConfig::temperature)},
      {"finetune.preset", field(&RunConfig::finetune_preset)},
      {"finetune.mode", field(&RunConfig::finetune_mode)},
      {"finetune.epochs", field(&RunConfig::finetune_epochs)},
      {"finetune.batch_size", field(&RunConfig::finetune_batch_size)},
      {"finetune.encoder_lr", field(&RunConfig::finetune_encoder_lr)},
      {"finetune.head_lr", field(&RunConfig::finetune_head_lr)},
      {"finetune.loss", field(&RunConfig::finetune_loss)},
      {"finetune.focal_gamma", field(&RunConfig::focal_gamma)},
      {"finetune.k_shot", field(&RunConfig::k_shot)},
      {"finetune.repeats", field(&RunConfig::repeats)},
      {"probe.epochs", field(&RunConfig::probe_epochs)},
      {"probe.batch_size", field(&RunConfig::probe_batch_size)},
      {"probe.lr", field(&RunConfig::probe_lr)},
      {"adda.epochs", field(&RunConfig::adda_epochs)},
      {"adda.batch_size", field(&RunConfig::adda_batch_size)},
      {"adda.encoder_lr", field(&RunConfig::adda_encoder_lr)},
      {"adda.discriminator_lr", field(&RunConfig::adda_discriminator_lr)},
      {"counter.event_threshold", field(&RunConfig::event_threshold)},
      {"counter.cooldown_period", field(&RunConfig::cooldown_period)},
      {"counter.clamp_at_zero", field(&RunConfig::clamp_at_zero)},
      {"synth.sessions", field(&RunConfig::synth_sessions)},
      {"synth.duration_s", field(&RunConfig::synth_duration_s)},
      {"synth.events", field(&RunConfig::synth_events)},
      {"synth.min_gap_s", field(&RunConfig::synth_min_gap_s)},
      {"synth.profile", field(&RunConfig::synth_profile)},
      {"synth.split", field(&RunConfig::synth_split)},
      {"paths.data_dir", field(&RunConfig::data_dir)},
      {"paths.run_dir", field(&RunConfig::run_dir)},
  };
  return fields;
}

const Field* find_field(std::string_view key) {
  for (const auto& [name, f] : registry())
    if (name == key) return &f;
  return nullptr;
}

}  // namespace

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, f] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

void RunConfig::set(std::string_view key, std::string_view value) {
  const Field* f = find_field(key);
  if (!f) throw ConfigError("unknown config key '" + std::string(key) + "'");
  f->set(*this, key, trim(value));
}

void RunConfig::apply_preset(std::string_view name) {
  finetune_preset = std::string(name);
  if (name == "wiflow") {
    finetune_epochs = 25;
    finetune_batch_size = 16;
    finetune_encoder_lr = 1e-4;
    finetune_head_lr = 1e-3;
    finetune_loss = "cross_entropy";
  } else if (name == "wiar") {
    finetune_epochs = 75;
    finetune_batch_size = 32;
    finetune_encoder_lr = 1e-4;
    finetune_head_lr = 1e-3;
    finetune_loss = "focal";
  } else if (name != "custom") {
    throw ConfigError("unknown fine-tuning preset '" + std::string(name) + "'");
  }
}

RunConfig RunConfig::parse(std::string_view text) {
  RunConfig cfg;
  // a preset fills the fine-tuning keys first; explicit keys then override it
  std::vector<std::pair<std::size_t, std::pair<std::string, std::string>>> entries;
  std::size_t line_no = 0, pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key=value, got '" + line + "'");
    }
    entries.push_back({line_no, {trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1))}});
  }
  for (const auto& [no, kv] : entries) {
    if (kv.first != "finetune.preset") continue;
    try {
      cfg.apply_preset(kv.second);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(no) + ": " + e.what());
    }
  }
  for (const auto& [no, kv] : entries) {
    try {
      cfg.set(kv.first, kv.second);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(no) + ": " + e.what());
    }
  }
  if (cfg.version != kVersion) {
    throw ConfigError("config version " + std::to_string(cfg.version) + " is not supported (expected " +
                      std::to_string(kVersion) + ")");
  }
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string RunConfig::to_text() const {
  std::string out;
  for (const auto& [name, f] : registry()) out += name + "=" + f.get(*this) + "\n";
  return out;
}

void RunConfig::validate() const {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  LabelSet::by_name(label_set);
  need(channels > 0, "data.channels must be >= 1");
  need(sample_rate_hz > 0, "data.sample_rate_hz must be > 0");
  need(filter_mode == "zero_phase" || filter_mode == "causal", "filter.mode must be zero_phase or causal");
  need(window_length > 0 && window_step > 0, "window length and step must be >= 1");
  need(event_span_s > 0, "label.event_span_s must be > 0");
  need(pretrain_batch_size >= 2, "pretrain.batch_size must be >= 2");
  need(pretrain_lr > 0 && finetune_encoder_lr > 0 && finetune_head_lr > 0 && probe_lr > 0 &&
           adda_encoder_lr > 0 && adda_discriminator_lr > 0,
       "learning rates must be > 0");
  need(temperature > 0, "pretrain.temperature must be > 0");
  need(pretrain_epochs >= 0 && finetune_epochs >= 0 && probe_epochs >= 0 && adda_epochs >= 0,
       "epoch counts must be >= 0");
  need(finetune_batch_size >= 1 && probe_batch_size >= 1 && adda_batch_size >= 2, "batch sizes too small");
  need(finetune_loss == "cross_entropy" || finetune_loss == "focal", "finetune.loss must be cross_entropy or focal");
  need(finetune_preset == "wiflow" || finetune_preset == "wiar" || finetune_preset == "custom",
       "finetune.preset must be wiflow, wiar or custom");
  need(k_shot >= 0 && repeats >= 1, "finetune.k_shot must be >= 0 and finetune.repeats >= 1");
  need(event_threshold >= 1 && cooldown_period >= 0, "counter thresholds out of range");
  need(synth_split.size() == 3, "synth.split needs three ratios");
  double total = 0;
  for (double r : synth_split) {
    need(r >= 0, "synth.split ratios must be >= 0");
    total += r;
  }
  need(std::abs(total - 1.0) < 1e-9, "synth.split ratios must sum to 1");
}

}  // namespace csisense
