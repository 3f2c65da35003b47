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

// Optimization loops: contrastive pre-training, supervised adaptation
// (adapters, final block, or full), linear probing, adversarial domain
// adaptation and repeated k-shot evaluation.
//
// Every loop is a deterministic function of its inputs and seed: batch
// order and augmentation draws come from seeds derived per epoch and item.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "csisense/augment.hpp"
#include "csisense/dsp.hpp"
#include "csisense/metrics.hpp"
#include "csisense/model.hpp"

namespace csisense {

struct EpochLog {
  int epoch = 0;
  double loss = 0;
  std::optional<double> accuracy;
  std::optional<double> discriminator_loss;
};

/// epoch,loss[,accuracy][,discriminator_loss]; columns follow the first row.
std::string log_to_csv(const std::vector<EpochLog>& log);

/// Re-estimates every batch-norm running mean and variance from train-mode
/// passes over `windows` (pooled over batches). Weights are untouched.
void recalibrate_batchnorm(CsiEncoder<float>& encoder, const std::vector<Window>& windows,
                           std::size_t batch_size = 256);

struct PretrainConfig {
  int epochs = 50;
  std::size_t batch_size = 128;
  double lr = 1e-3;
  double temperature = 0.1;
  std::uint64_t seed = 0;
};

/// Minimizes NT-Xent over augmented view pairs. Adapters stay frozen at
/// identity; every other encoder parameter and the projection head train.
/// A trailing batch with fewer than two windows is skipped. Batch-norm
/// statistics are recalibrated on the un-augmented windows at the end.
std::vector<EpochLog> pretrain_contrastive(CsiEncoder<float>& encoder, ProjectionHead<float>& projection,
                                           const std::vector<Window>& windows, const PretrainConfig& cfg,
                                           const AugmentPolicy& policy);

enum class LossKind { kCrossEntropy, kFocal };
std::string_view to_string(LossKind kind);
LossKind parse_loss_kind(std::string_view name);

struct FinetuneConfig {
  TrainMode mode = TrainMode::kAdaptersAndHead;
  int epochs = 25;
  std::size_t batch_size = 16;
  double encoder_lr = 1e-4;  // every trainable non-head parameter
  double head_lr = 1e-3;
  LossKind loss = LossKind::kCrossEntropy;
  double focal_gamma = 2.0;
  std::uint64_t seed = 0;

  /// "wiflow": 25 epochs, batch 16, cross-entropy. "wiar": 75 epochs,
  /// batch 32, focal loss. Both use 1e-4 / 1e-3 learning rates.
  static FinetuneConfig preset(std::string_view name);
};

struct AdaptResult {
  TrainableMask mask;
  ParamCounts counts;
  std::vector<EpochLog> log;
};

/// Trains the parameters selected by cfg.mode with two learning-rate groups
/// (encoder, head). Throws std::out_of_range for labels outside the head.
AdaptResult finetune_classifier(EventClassifier<float>& model, const std::vector<LabeledWindow>& labeled,
                                const FinetuneConfig& cfg);

struct ProbeConfig {
  int epochs = 100;
  std::size_t batch_size = 32;
  double lr = 1e-2;
  std::uint64_t seed = 0;
};

/// Head-only training on embeddings computed once in eval mode.
AdaptResult linear_probe(EventClassifier<float>& model, const std::vector<LabeledWindow>& labeled,
                         const ProbeConfig& cfg);

struct AddaConfig {
  int epochs = 50;
  std::size_t batch_size = 32;
  double encoder_lr = 1e-4;
  double discriminator_lr = 1e-3;
  std::size_t discriminator_hidden = 64;
  std::uint64_t seed = 0;
};

struct AddaResult {
  CsiEncoder<float> target;
  DomainDiscriminator<float> discriminator;
  std::vector<EpochLog> log;  // loss = generator, discriminator_loss = discriminator
};

/// Adversarial adaptation. The source encoder is copied and used only in
/// eval mode, so the caller's encoder is never modified. The target encoder
/// starts from the source weights and trains in train mode; its batch-norm
/// statistics are recalibrated on the target windows at the end. Per batch:
/// one discriminator step, then one target-encoder step.
AddaResult adda_adapt(const CsiEncoder<float>& source, const std::vector<Window>& source_windows,
                      const std::vector<Window>& target_windows, const AddaConfig& cfg);

/// Eval-mode embeddings [N, embedding_dim].
Tensor<float> embed_windows(CsiEncoder<float>& encoder, const std::vector<Window>& windows,
                            std::size_t batch_size = 256);
/// Argmax class per window, eval mode.
std::vector<int> predict(EventClassifier<float>& model, const std::vector<Window>& windows,
                         std::size_t batch_size = 256);

/// Held-out logistic-regression domain probe: standardizes features, trains
/// on a seeded half of each domain and returns accuracy on the other half.
double domain_probe_accuracy(const Tensor<float>& source_embeddings, const Tensor<float>& target_embeddings,
                             std::uint64_t seed, int epochs = 300);

struct KShotSplit {
  std::vector<std::size_t> train;  // indices into the pool
  std::vector<std::size_t> rest;
};

/// k examples of each class, drawn without replacement. k = 0 takes the
/// whole pool. Throws when a class has fewer than k examples.
KShotSplit sample_kshot(const std::vector<LabeledWindow>& pool, std::size_t num_classes, std::size_t k,
                        std::uint64_t seed);

enum class KShotMethod { kFinetune, kProbe };

struct KShotRow {
  int repeat = 0;
  std::uint64_t seed = 0;
  double accuracy = 0;
  double weighted_f1 = 0;
};

struct KShotSummary {
  std::vector<KShotRow> rows;
  MeanStd accuracy;
  MeanStd weighted_f1;
};

/// Repeats: sample k per class from `pool`, build a fresh model with
/// `make_model`, train by `method`, score on `test` (or on the pool
/// remainder when `test` is empty).
KShotSummary kshot_eval(const std::function<EventClassifier<float>()>& make_model,
                        const std::vector<LabeledWindow>& pool, const std::vector<LabeledWindow>& test,
                        std::size_t num_classes, std::size_t k, int repeats, KShotMethod method,
                        const FinetuneConfig& finetune_cfg, const ProbeConfig& probe_cfg, std::uint64_t seed);

std::string kshot_to_csv(const KShotSummary& summary);

}  // namespace csisense
