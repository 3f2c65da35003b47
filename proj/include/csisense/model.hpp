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

// Residual 1D CSI encoder with squeeze-and-excitation gates and bottleneck
// adapters, plus the classification head, the contrastive projection head
// and the domain discriminator.
//
// Every module exposes its learnable tensors as NamedParam entries with a
// stable dotted path ("layer2.0.conv1.weight"); checkpoints, trainable
// masks and parameter accounting all key off these paths.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "csisense/dsp.hpp"
#include "csisense/ops.hpp"
#include "csisense/random.hpp"
#include "csisense/tensor.hpp"

namespace csisense {

struct EncoderConfig {
  std::size_t in_channels = 52;
  std::size_t window_len = 100;
  std::vector<std::size_t> layer_channels{64, 128, 256};
  std::size_t blocks_per_layer = 2;
  std::size_t se_reduction = 16;
  std::size_t adapter_bottleneck = 16;
  std::size_t embedding_dim = 128;
  bool se_enabled = true;
  bool adapters_enabled = true;

  void validate() const;
  bool operator==(const EncoderConfig&) const = default;
};

enum class ParamRole { kBackbone, kAdapter, kHead, kProjection, kDiscriminator };

template <typename T>
struct NamedParam {
  std::string path;
  Tensor<T> tensor;
  ParamRole role;
};

template <typename T>
class Conv1dLayer {
 public:
  Conv1dLayer() = default;
  Conv1dLayer(std::size_t in_ch, std::size_t out_ch, std::size_t kernel, std::size_t stride,
              std::size_t padding);

  Tensor<T> forward(Graph<T>& g, const Tensor<T>& x) const;
  void init(Rng& rng);
  void collect(const std::string& prefix, ParamRole role, std::vector<NamedParam<T>>& out) const;

  Tensor<T> weight;
  Tensor<T> bias;
  std::size_t stride = 1;
  std::size_t padding = 0;
};

template <typename T>
class BatchNorm1dLayer {
 public:
  BatchNorm1dLayer() = default;
  explicit BatchNorm1dLayer(std::size_t channels);

  /// A frozen layer always normalizes with its running statistics and never
  /// updates them.
  Tensor<T> forward(Graph<T>& g, const Tensor<T>& x, Mode mode);
  void collect(const std::string& prefix, ParamRole role, std::vector<NamedParam<T>>& params) const;
  void collect_buffers(const std::string& prefix, std::vector<NamedParam<T>>& buffers) const;

  Tensor<T> gamma;
  Tensor<T> beta;
  BatchNormStats<T> stats;
  bool frozen = false;
};

template <typename T>
class LinearLayer {
 public:
  LinearLayer() = default;
  LinearLayer(std::size_t in_features, std::size_t out_features);

  Tensor<T> forward(Graph<T>& g, const Tensor<T>& x) const;
  void init(Rng& rng);
  void collect(const std::string& prefix, ParamRole role, std::vector<NamedParam<T>>& out) const;

  Tensor<T> weight;
  Tensor<T> bias;
};

/// Channel gate: s = sigmoid(W2 relu(W1 GAP(U))), out_c = s_c * U_c. No biases.
template <typename T>
class SEBlock {
 public:
  SEBlock() = default;
  SEBlock(std::size_t channels, std::size_t reduction);

  Tensor<T> forward(Graph<T>& g, const Tensor<T>& u) const;
  void init(Rng& rng);
  void collect(const std::string& prefix, std::vector<NamedParam<T>>& out) const;

  Tensor<T> w1;  // [C/r, C]
  Tensor<T> w2;  // [C, C/r]

 private:
  Tensor<T> zero_hidden_;
  Tensor<T> zero_out_;
};

/// x + up(relu(down(x))) with 1x1 convolutions. The up path starts at zero,
/// so a fresh adapter is the identity.
template <typename T>
class Adapter {
 public:
  Adapter() = default;
  Adapter(std::size_t channels, std::size_t bottleneck);

  Tensor<T> forward(Graph<T>& g, const Tensor<T>& x) const;
  void init(Rng& rng);
  void collect(const std::string& prefix, std::vector<NamedParam<T>>& out) const;

  Conv1dLayer<T> down;
  Conv1dLayer<T> up;
};

template <typename T>
class ResidualBlock {
 public:
  ResidualBlock() = default;
  ResidualBlock(std::size_t in_ch, std::size_t out_ch, std::size_t stride, const EncoderConfig& cfg);

  Tensor<T> forward(Graph<T>& g, const Tensor<T>& x, Mode mode);
  void init(Rng& rng);
  void collect(const std::string& prefix, std::vector<NamedParam<T>>& out) const;
  void collect_buffers(const std::string& prefix, std::vector<NamedParam<T>>& out) const;
  /// (path prefix, layer) for every batch-norm layer in the block.
  std::vector<std::pair<std::string, BatchNorm1dLayer<T>*>> batchnorms(const std::string& prefix);

  bool has_shortcut() const { return shortcut_conv.has_value(); }

  Conv1dLayer<T> conv1;
  BatchNorm1dLayer<T> bn1;
  Conv1dLayer<T> conv2;
  BatchNorm1dLayer<T> bn2;
  std::optional<SEBlock<T>> se;
  std::optional<Adapter<T>> adapter;
  std::optional<Conv1dLayer<T>> shortcut_conv;
  std::optional<BatchNorm1dLayer<T>> shortcut_bn;
};

/// Temporal lengths seen by the encoder: input, stem conv, stem pool, then
/// the output of every layer.
struct EncoderTrace {
  std::vector<std::size_t> lengths;
};

template <typename T>
class CsiEncoder {
 public:
  CsiEncoder() = default;
  CsiEncoder(const EncoderConfig& cfg, std::uint64_t seed);

  /// x: [B, in_channels, window_len] -> [B, embedding_dim].
  Tensor<T> forward(Graph<T>& g, const Tensor<T>& x, Mode mode, EncoderTrace* trace = nullptr);

  std::vector<NamedParam<T>> parameters() const;
  std::vector<NamedParam<T>> buffers() const;
  std::vector<std::pair<std::string, BatchNorm1dLayer<T>*>> batchnorms();
  /// Independent copy: same config, parameter values and running statistics.
  CsiEncoder clone() const;
  /// Path prefix of the last residual block, e.g. "layer3.1".
  std::string final_block_prefix() const;

  const EncoderConfig& config() const { return cfg_; }

  Conv1dLayer<T> stem_conv;
  BatchNorm1dLayer<T> stem_bn;
  std::vector<std::vector<ResidualBlock<T>>> layers;
  LinearLayer<T> fc;

 private:
  EncoderConfig cfg_;
};

template <typename T>
class ClassificationHead {
 public:
  ClassificationHead() = default;
  ClassificationHead(std::size_t embedding_dim, std::size_t num_classes, std::uint64_t seed);

  Tensor<T> forward(Graph<T>& g, const Tensor<T>& e) const { return fc.forward(g, e); }
  std::vector<NamedParam<T>> parameters() const;
  std::size_t num_classes() const { return fc.weight.dim(0); }

  LinearLayer<T> fc;
};

/// 128 -> 128 -> 64 with relu; used only while pre-training.
template <typename T>
class ProjectionHead {
 public:
  ProjectionHead() = default;
  ProjectionHead(std::size_t embedding_dim, std::size_t hidden, std::size_t out, std::uint64_t seed);

  Tensor<T> forward(Graph<T>& g, const Tensor<T>& e) const;
  std::vector<NamedParam<T>> parameters() const;

  LinearLayer<T> fc1;
  LinearLayer<T> fc2;
};

/// 128 -> 64 -> 1 with relu; outputs a raw logit per row.
template <typename T>
class DomainDiscriminator {
 public:
  DomainDiscriminator() = default;
  DomainDiscriminator(std::size_t embedding_dim, std::size_t hidden, std::uint64_t seed);

  Tensor<T> forward(Graph<T>& g, const Tensor<T>& e) const;
  std::vector<NamedParam<T>> parameters() const;

  LinearLayer<T> fc1;
  LinearLayer<T> fc2;
};

/// Encoder plus classification head: the deployable model.
template <typename T>
struct EventClassifier {
  CsiEncoder<T> encoder;
  ClassificationHead<T> head;

  Tensor<T> forward(Graph<T>& g, const Tensor<T>& x, Mode mode) {
    return head.forward(g, encoder.forward(g, x, mode));
  }
  std::vector<NamedParam<T>> parameters() const;
};

enum class TrainMode { kFull, kAdaptersAndHead, kHeadOnly, kFinalBlockAndHead };

std::string_view to_string(TrainMode mode);
TrainMode parse_train_mode(std::string_view name);  // throws on unknown

struct TrainableMask {
  TrainMode mode = TrainMode::kFull;
  std::map<std::string, bool> trainable;  // keyed by parameter path

  bool is_trainable(const std::string& path) const;
};

/// Sets requires_grad on every parameter per `mode` and freezes batch-norm
/// layers whose affine parameters are frozen.
template <typename T>
TrainableMask set_trainable(EventClassifier<T>& model, TrainMode mode);

struct ParamCounts {
  std::map<std::string, std::size_t> by_group;  // "layer1.0.se", "stem.conv", ...
  std::size_t total = 0;
  std::size_t trainable = 0;
};

/// Groups are parameter paths with the final component dropped. Without a
/// mask, `trainable` equals `total`.
template <typename T>
ParamCounts count_params(const std::vector<NamedParam<T>>& params, const TrainableMask* mask = nullptr);

/// One row of the layer listing printed by `describe`.
struct LayerRow {
  std::string name;
  std::string output_dim;
  std::size_t params = 0;
  std::string details;
  int depth = 1;  // 0 = section heading, 1 = layer
};

std::vector<LayerRow> describe_encoder(const EncoderConfig& cfg);
std::string format_layer_table(const std::vector<LayerRow>& rows);

/// Packs windows into a channels-first [B, C, W] batch.
template <typename T>
Tensor<T> make_batch(std::span<const Window* const> windows);
template <typename T>
Tensor<T> make_batch(const std::vector<Window>& windows);

}  // namespace csisense
