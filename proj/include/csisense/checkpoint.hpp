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

// Binary checkpoint file, all integers little-endian:
//
//   "CSIS"  u32 version
//   u32 len + bytes   resolved run config (key=value text)
//   u32 len + bytes   provenance (key=value text)
//   u32 blob count
//   per blob: u32 name len, name, u32 rank, u64 dims[rank], f32 values
//   u32 CRC-32 of every preceding byte

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "csisense/model.hpp"
#include "csisense/tensor.hpp"

namespace csisense {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  std::string config;
  std::string provenance;
  std::vector<std::pair<std::string, Tensor<float>>> blobs;

  const Tensor<float>* find(std::string_view name) const;
  bool has_prefix(std::string_view prefix) const;
  /// Blobs whose name starts with `prefix`, with the prefix removed.
  std::vector<std::pair<std::string, Tensor<float>>> section(std::string_view prefix) const;
  void add(std::string name, const Tensor<float>& value);
};

std::string serialize_checkpoint(const Checkpoint& ckpt);
/// Rejects bad magic, version mismatch, truncation and checksum failures.
Checkpoint parse_checkpoint(std::string_view bytes);

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Section prefixes used by the pipeline.
inline constexpr std::string_view kEncoderSection = "encoder.";
inline constexpr std::string_view kHeadSection = "head.";
inline constexpr std::string_view kProjectionSection = "projection.";
inline constexpr std::string_view kDiscriminatorSection = "discriminator.";

/// Copies parameters (and running statistics, for the encoder) into the
/// checkpoint under `prefix`. Values are deep-copied.
void export_params(Checkpoint& ckpt, std::string_view prefix, const std::vector<NamedParam<float>>& params);
/// Overwrites every parameter from the `prefix` section; throws on a
/// missing blob or shape mismatch.
void import_params(const Checkpoint& ckpt, std::string_view prefix, std::vector<NamedParam<float>> params);

void export_encoder(Checkpoint& ckpt, const CsiEncoder<float>& encoder);
void import_encoder(const Checkpoint& ckpt, CsiEncoder<float>& encoder);

/// Raw bytes of every blob under `prefix`, name-sorted; for byte-level
/// comparisons of frozen sections.
std::string section_bytes(const Checkpoint& ckpt, std::string_view prefix);

}  // namespace csisense
