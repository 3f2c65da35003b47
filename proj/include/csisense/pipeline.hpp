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

// Glue between a RunConfig and the module-level option structs, plus the
// synthetic end-to-end run: generate sessions, pre-train, k-shot adapt,
// classify held-out sessions and count occupancy.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "csisense/augment.hpp"
#include "csisense/checkpoint.hpp"
#include "csisense/config.hpp"
#include "csisense/counter.hpp"
#include "csisense/dsp.hpp"
#include "csisense/metrics.hpp"
#include "csisense/synth.hpp"
#include "csisense/train.hpp"

namespace csisense {

/// Independent seed streams derived from RunConfig::seed.
enum class SeedStream : std::uint64_t {
  kRoom = 1,
  kSessions,
  kEncoder,
  kProjection,
  kHead,
  kAugment,
  kPretrain,
  kFinetune,
  kKShot,
  kProbe,
  kAdda,
};
std::uint64_t stream_seed(const RunConfig& cfg, SeedStream stream);

EncoderConfig encoder_config(const RunConfig& cfg);
PreprocessOptions preprocess_options(const RunConfig& cfg);
AugmentPolicy augment_policy(const RunConfig& cfg);
PretrainConfig pretrain_config(const RunConfig& cfg);
FinetuneConfig finetune_config(const RunConfig& cfg);
ProbeConfig probe_config(const RunConfig& cfg);
AddaConfig adda_config(const RunConfig& cfg);
CounterConfig counter_config(const RunConfig& cfg);
SynthOptions synth_options(const RunConfig& cfg);
DomainProfile domain_profile(const RunConfig& cfg, int profile_id);
/// Seed of the synthetic sessions of one profile.
std::uint64_t session_seed(const RunConfig& cfg, int profile_id);

/// Fresh encoder, projection and head initialized from the config seed.
CsiEncoder<float> make_encoder(const RunConfig& cfg);
ProjectionHead<float> make_projection(const RunConfig& cfg);
ClassificationHead<float> make_head(const RunConfig& cfg);

/// A preprocessed session with its occupancy truth per window.
struct LoadedSession {
  std::string id;
  std::string split;  // train, val or test
  PreparedSession prepared;
  std::vector<int> occupancy;
};

LoadedSession from_synth(const SynthSession& s, std::string split);
std::vector<LoadedSession> from_synth(const SynthDataset& data);

/// Writes every session as `<id>.csv` plus its events sidecar, and an index
/// `sessions.csv` (session,split,profile).
void write_synth_dataset(const SynthDataset& data, int profile_id, const std::filesystem::path& dir,
                         const LabelSet& labels);
/// Reads the index in `dir` and preprocesses the sessions whose split is in
/// `splits` (all sessions when empty).
std::vector<LoadedSession> load_sessions(const std::filesystem::path& dir, const RunConfig& cfg,
                                         const std::vector<std::string>& splits = {});

std::vector<Window> windows_of(const std::vector<LoadedSession>& sessions);
std::vector<LabeledWindow> labeled_of(const std::vector<LoadedSession>& sessions);

/// Per-window oracle predictions: the purified label where a window has one,
/// the background label elsewhere.
std::vector<int> oracle_predictions(const LoadedSession& s, int background);

struct SessionCount {
  std::string session;
  std::vector<int> predicted;  // counter occupancy per window
  std::vector<int> truth;
};

/// Classifies every window of each session, runs the counter over the
/// predictions and pairs the occupancy trace with the scripted truth.
std::vector<SessionCount> count_sessions(EventClassifier<float>& model, const std::vector<LoadedSession>& sessions,
                                         const CounterConfig& counter);
std::vector<SessionCount> count_sessions_oracle(const std::vector<LoadedSession>& sessions, int background,
                                                const CounterConfig& counter);
/// session,windows,final_predicted,final_truth,mae
std::string counts_to_csv(const std::vector<SessionCount>& counts);
CountingErrors pooled_counting_errors(const std::vector<SessionCount>& counts);

struct SyntheticRun {
  Checkpoint checkpoint;  // encoder, projection and head
  std::string pretrain_log;
  std::string finetune_log;
  std::string metrics_csv;  // test-split classification report
  std::string counts_csv;
  MetricReport report;
  CountingErrors counting;
  ParamCounts params;
};

/// The full synthetic pipeline on one domain profile (cfg.synth_profile).
/// Fine-tuning draws cfg.k_shot windows per class from the training split;
/// evaluation uses the test split.
SyntheticRun run_synthetic_pipeline(const RunConfig& cfg);

}  // namespace csisense
