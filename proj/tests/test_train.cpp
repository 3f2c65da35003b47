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

#include <cstring>
#include <stdexcept>

#include "csisense/synth.hpp"
#include "csisense/train.hpp"
#include "test_util.hpp"

using namespace csisense;

namespace {

constexpr std::size_t kChannels = 8;

EncoderConfig small_encoder() {
  EncoderConfig cfg;
  cfg.in_channels = kChannels;
  cfg.layer_channels = {8, 16};
  cfg.blocks_per_layer = 1;
  cfg.se_reduction = 4;
  cfg.adapter_bottleneck = 4;
  cfg.embedding_dim = 16;
  return cfg;
}

const SynthDataset& dataset() {
  static const SynthDataset data = generate_dataset(4, DomainProfile::make(0, kChannels, 3), {0.5, 0.25, 0.25}, 5);
  return data;
}

std::string param_bytes(const std::vector<NamedParam<float>>& ps) {
  std::string out;
  for (const auto& p : ps) {
    const auto d = p.tensor.data();
    out.append(p.path);
    out.append(reinterpret_cast<const char*>(d.data()), d.size_bytes());
  }
  return out;
}

std::string encoder_bytes(const CsiEncoder<float>& enc) {
  return param_bytes(enc.parameters()) + param_bytes(enc.buffers());
}

EventClassifier<float> small_classifier(std::uint64_t seed) {
  return {CsiEncoder<float>(small_encoder(), seed), ClassificationHead<float>(16, 3, seed + 1)};
}

}  // namespace

TEST_CASE("contrastive pre-training lowers the loss and is reproducible") {
  const auto windows = all_windows(dataset().train);
  PretrainConfig cfg;
  cfg.epochs = 4;
  cfg.batch_size = 32;
  cfg.seed = 9;
  AugmentPolicy policy;
  policy.seed = 4;

  CsiEncoder<float> a(small_encoder(), 1);
  ProjectionHead<float> pa(16, 16, 8, 2);
  const auto adapters_before = param_bytes(a.parameters());
  const auto log = pretrain_contrastive(a, pa, windows, cfg, policy);
  REQUIRE(log.size() == 4);
  CHECK(log.back().loss < log.front().loss);

  for (const auto& p : a.parameters()) {
    if (p.role != ParamRole::kAdapter || p.path.find(".up.") == std::string::npos) continue;
    for (float v : p.tensor.data()) CHECK(v == 0.0f);
  }

  CsiEncoder<float> b(small_encoder(), 1);
  ProjectionHead<float> pb(16, 16, 8, 2);
  const auto log_b = pretrain_contrastive(b, pb, windows, cfg, policy);
  CHECK(encoder_bytes(a) == encoder_bytes(b));
  CHECK(log_to_csv(log) == log_to_csv(log_b));
  CHECK(encoder_bytes(a) != adapters_before);
}

TEST_CASE("adapter fine-tuning leaves frozen tensors byte-identical") {
  auto model = small_classifier(3);
  const auto& labeled = dataset().train.front().prepared.labeled;
  std::vector<LabeledWindow> pool;
  for (const auto& s : dataset().train) pool.insert(pool.end(), s.prepared.labeled.begin(), s.prepared.labeled.end());

  std::map<std::string, std::string> before;
  for (const auto& p : model.parameters()) before[p.path] = param_bytes({p});
  const auto buffers_before = param_bytes(model.encoder.buffers());

  FinetuneConfig cfg;
  cfg.epochs = 2;
  cfg.seed = 1;
  const auto r = finetune_classifier(model, pool, cfg);
  CHECK(r.log.size() == 2);
  CHECK(r.log.front().accuracy.has_value());
  bool some_trainable_changed = false;
  for (const auto& p : model.parameters()) {
    const bool changed = param_bytes({p}) != before[p.path];
    if (!r.mask.is_trainable(p.path)) CHECK_MESSAGE(!changed, p.path);
    some_trainable_changed |= changed && r.mask.is_trainable(p.path);
  }
  CHECK(some_trainable_changed);
  CHECK(param_bytes(model.encoder.buffers()) == buffers_before);

  auto bad = labeled;
  bad.front().label = 5;
  CHECK_THROWS_AS(finetune_classifier(model, bad, cfg), std::out_of_range);
}

TEST_CASE("linear probe trains only the head") {
  auto model = small_classifier(4);
  const auto enc_before = encoder_bytes(model.encoder);
  ProbeConfig cfg;
  cfg.epochs = 5;
  const auto r = linear_probe(model, dataset().train.front().prepared.labeled, cfg);
  CHECK(encoder_bytes(model.encoder) == enc_before);
  CHECK(r.counts.trainable == 16 * 3 + 3);
  CHECK(r.log.size() == 5);
}

TEST_CASE("k-shot sampling") {
  const auto& pool = dataset().train.front().prepared.labeled;
  const auto split = sample_kshot(pool, 3, 2, 7);
  CHECK(split.train.size() == 6);
  CHECK(split.train.size() + split.rest.size() == pool.size());
  std::array<int, 3> per{};
  for (auto i : split.train) ++per[static_cast<std::size_t>(pool[i].label)];
  CHECK(per == std::array<int, 3>{2, 2, 2});
  for (auto i : split.train) CHECK(std::find(split.rest.begin(), split.rest.end(), i) == split.rest.end());
  CHECK(sample_kshot(pool, 3, 2, 7).train == split.train);
  CHECK(sample_kshot(pool, 3, 0, 7).train.size() == pool.size());
  CHECK_THROWS(sample_kshot(pool, 3, 1000, 7));
}

TEST_CASE("k-shot evaluation repeats") {
  std::vector<LabeledWindow> pool;
  for (const auto& s : dataset().train) pool.insert(pool.end(), s.prepared.labeled.begin(), s.prepared.labeled.end());
  FinetuneConfig ft;
  ft.epochs = 1;
  ProbeConfig pc;
  pc.epochs = 2;
  const auto summary = kshot_eval([] { return small_classifier(5); }, pool, {}, 3, 2, 3, KShotMethod::kProbe, ft, pc, 11);
  CHECK(summary.rows.size() == 3);
  CHECK(summary.rows[0].seed != summary.rows[1].seed);
  const auto csv = kshot_to_csv(summary);
  CHECK(csv.find("mean") != std::string::npos);
  CHECK(csv.find("std") != std::string::npos);
}

TEST_CASE("batch-norm recalibration does not depend on batch size") {
  const auto windows = all_windows(dataset().train);
  CsiEncoder<float> a(small_encoder(), 6);
  auto b = a.clone();
  recalibrate_batchnorm(a, windows, 256);
  recalibrate_batchnorm(b, windows, 7);
  const auto ba = a.buffers(), bb = b.buffers();
  REQUIRE(ba.size() == bb.size());
  // Only the stem sees inputs that do not depend on other batch members.
  for (std::size_t i = 0; i < ba.size(); ++i) {
    if (!ba[i].path.starts_with("stem.")) continue;
    const auto x = ba[i].tensor.data(), y = bb[i].tensor.data();
    for (std::size_t j = 0; j < x.size(); ++j) CHECK(x[j] == doctest::Approx(y[j]).epsilon(1e-3));
  }
  CHECK(param_bytes(a.parameters()) == param_bytes(b.parameters()));
}

TEST_CASE("adversarial adaptation never touches the source encoder") {
  const auto src = all_windows(dataset().train);
  const auto tgt = all_windows(generate_dataset(2, DomainProfile::make(1, kChannels, 3), {1, 0, 0}, 6).train);
  const CsiEncoder<float> source(small_encoder(), 8);
  const auto before = encoder_bytes(source);
  AddaConfig cfg;
  cfg.epochs = 2;
  cfg.discriminator_hidden = 8;
  const auto r = adda_adapt(source, src, tgt, cfg);
  CHECK(encoder_bytes(source) == before);
  CHECK(encoder_bytes(r.target) != before);
  CHECK(r.log.size() == 2);
  CHECK(r.log.front().discriminator_loss.has_value());
}

TEST_CASE("domain probe separates shifted embeddings and not identical ones") {
  Rng rng(12);
  const auto a = csisense::testing::random_tensor<float>({200, 4}, rng);
  const auto b = csisense::testing::random_tensor<float>({200, 4}, rng);
  auto shifted = b.clone();
  for (std::size_t i = 0; i < 200; ++i) shifted.data()[i * 4] += 3.0f;
  CHECK(domain_probe_accuracy(a, shifted, 1) > 0.95);
  CHECK(std::abs(domain_probe_accuracy(a, b, 1) - 0.5) < 0.1);
}

TEST_CASE("training log CSV columns") {
  std::vector<EpochLog> log{{1, 0.5, 0.25, std::nullopt}, {2, 0.25, 0.5, std::nullopt}};
  const auto csv = log_to_csv(log);
  CHECK(csv.starts_with("epoch,loss,accuracy\n"));
  CHECK(csv.find("2,0.25,0.5") != std::string::npos);
  CHECK(parse_loss_kind(to_string(LossKind::kFocal)) == LossKind::kFocal);
  CHECK(FinetuneConfig::preset("wiar").epochs == 75);
  CHECK(FinetuneConfig::preset("wiar").loss == LossKind::kFocal);
  CHECK(FinetuneConfig::preset("wiflow").batch_size == 16);
}
