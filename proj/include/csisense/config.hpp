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

// Flat, versioned key=value run configuration. Lines are `key=value`;
// blank lines and lines starting with '#' are ignored. Unknown keys and
// malformed values are errors that name the offending line.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace csisense {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  static constexpr int kVersion = 1;

  int version = kVersion;
  std::uint64_t seed = 7;

  // data
  std::string label_set = "doorway";
  std::size_t channels = 52;
  double sample_rate_hz = 100.0;

  // filter
  int filter_order = 4;
  double filter_cutoff_hz = 8.0;
  std::string filter_mode = "zero_phase";

  // windows and labels
  std::size_t window_length = 100;
  std::size_t window_step = 50;
  double event_span_s = 2.0;

  // augmentation
  double jitter_sigma = 0.03;
  double scale_sigma = 0.1;
  int max_segments = 5;

  // model
  std::vector<std::size_t> layer_channels{64, 128, 256};
  std::size_t blocks_per_layer = 2;
  std::size_t se_reduction = 16;
  std::size_t adapter_bottleneck = 16;
  std::size_t embedding_dim = 128;
  bool se_enabled = true;
  bool adapters_enabled = true;
  std::size_t projection_hidden = 128;
  std::size_t projection_dim = 64;
  std::size_t discriminator_hidden = 64;

  // contrastive pre-training
  int pretrain_epochs = 50;
  std::size_t pretrain_batch_size = 128;
  double pretrain_lr = 1e-3;
  double temperature = 0.1;

  // supervised adaptation
  std::string finetune_preset = "wiflow";
  std::string finetune_mode = "adapters_and_head";
  int finetune_epochs = 25;
  std::size_t finetune_batch_size = 16;
  double finetune_encoder_lr = 1e-4;
  double finetune_head_lr = 1e-3;
  std::string finetune_loss = "cross_entropy";
  double focal_gamma = 2.0;
  int k_shot = 10;  // per class; 0 uses every labeled training window
  int repeats = 1;

  int probe_epochs = 100;
  std::size_t probe_batch_size = 32;
  double probe_lr = 1e-2;

  // adversarial adaptation
  int adda_epochs = 50;
  std::size_t adda_batch_size = 32;
  double adda_encoder_lr = 1e-4;
  double adda_discriminator_lr = 1e-3;

  // counting
  int event_threshold = 5;
  int cooldown_period = 10;
  bool clamp_at_zero = true;

  // synthetic data
  std::size_t synth_sessions = 40;
  double synth_duration_s = 60.0;
  std::size_t synth_events = 3;
  double synth_min_gap_s = 15.0;
  int synth_profile = 0;
  std::vector<double> synth_split{0.8, 0.1, 0.1};

  // paths
  std::string data_dir = "data";
  std::string run_dir = "runs/default";

  /// Parses a document on top of the defaults.
  static RunConfig parse(std::string_view text);
  static RunConfig load(const std::string& path);
  /// Sets the fine-tuning recipe of a named preset: wiflow (25 epochs,
  /// batch 16, cross-entropy), wiar (75 epochs, batch 32, focal) or custom
  /// (leaves the keys alone). In a parsed document explicit keys win.
  void apply_preset(std::string_view name);
  /// Applies one `key=value` override.
  void set(std::string_view key, std::string_view value);
  /// Every key, one per line, in a fixed order. parse(to_text()) == *this.
  std::string to_text() const;
  /// Cross-field checks (positive sizes, known enum names, split sums).
  void validate() const;

  static const std::vector<std::string>& keys();
  bool operator==(const RunConfig&) const = default;
};

}  // namespace csisense
