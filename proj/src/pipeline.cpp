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

#include "csisense/pipeline.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "csisense/csv_io.hpp"
#include "csisense/labels.hpp"

namespace csisense {

std::uint64_t stream_seed(const RunConfig& cfg, SeedStream stream) {
  return derive_seed(cfg.seed, static_cast<std::uint64_t>(stream));
}

EncoderConfig encoder_config(const RunConfig& cfg) {
  EncoderConfig e;
  e.in_channels = cfg.channels;
  e.window_len = cfg.window_length;
  e.layer_channels = cfg.layer_channels;
  e.blocks_per_layer = cfg.blocks_per_layer;
  e.se_reduction = cfg.se_reduction;
  e.adapter_bottleneck = cfg.adapter_bottleneck;
  e.embedding_dim = cfg.embedding_dim;
  e.se_enabled = cfg.se_enabled;
  e.adapters_enabled = cfg.adapters_enabled;
  return e;
}

PreprocessOptions preprocess_options(const RunConfig& cfg) {
  const LabelSet labels = LabelSet::by_name(cfg.label_set);
  PreprocessOptions p;
  p.filter = FilterSpec::make(cfg.filter_order, cfg.filter_cutoff_hz, cfg.sample_rate_hz);
  p.mode = cfg.filter_mode == "causal" ? FilterMode::kCausal : FilterMode::kZeroPhase;
  p.window_len = cfg.window_length;
  p.step = cfg.window_step;
  p.event_span_s = cfg.event_span_s;
  p.num_classes = labels.size();
  p.background = labels.background;
  return p;
}

AugmentPolicy augment_policy(const RunConfig& cfg) {
  return {cfg.jitter_sigma, cfg.scale_sigma, cfg.max_segments, stream_seed(cfg, SeedStream::kAugment)};
}

PretrainConfig pretrain_config(const RunConfig& cfg) {
  return {cfg.pretrain_epochs, cfg.pretrain_batch_size, cfg.pretrain_lr, cfg.temperature,
          stream_seed(cfg, SeedStream::kPretrain)};
}

FinetuneConfig finetune_config(const RunConfig& cfg) {
  FinetuneConfig f;
  f.mode = parse_train_mode(cfg.finetune_mode);
  f.epochs = cfg.finetune_epochs;
  f.batch_size = cfg.finetune_batch_size;
  f.encoder_lr = cfg.finetune_encoder_lr;
  f.head_lr = cfg.finetune_head_lr;
  f.loss = parse_loss_kind(cfg.finetune_loss);
  f.focal_gamma = cfg.focal_gamma;
  f.seed = stream_seed(cfg, SeedStream::kFinetune);
  return f;
}

ProbeConfig probe_config(const RunConfig& cfg) {
  return {cfg.probe_epochs, cfg.probe_batch_size, cfg.probe_lr, stream_seed(cfg, SeedStream::kProbe)};
}

AddaConfig adda_config(const RunConfig& cfg) {
  return {cfg.adda_epochs,     cfg.adda_batch_size,          cfg.adda_encoder_lr,
          cfg.adda_discriminator_lr, cfg.discriminator_hidden, stream_seed(cfg, SeedStream::kAdda)};
}

CounterConfig counter_config(const RunConfig& cfg) {
  return {cfg.event_threshold, cfg.cooldown_period, cfg.clamp_at_zero};
}

SynthOptions synth_options(const RunConfig& cfg) {
  SynthOptions s;
  s.duration_s = cfg.synth_duration_s;
  s.events_per_script = cfg.synth_events;
  s.min_gap_s = cfg.synth_min_gap_s;
  s.preprocess = preprocess_options(cfg);
  return s;
}

DomainProfile domain_profile(const RunConfig& cfg, int profile_id) {
  auto p = DomainProfile::make(profile_id, cfg.channels, stream_seed(cfg, SeedStream::kRoom));
  p.sample_rate_hz = cfg.sample_rate_hz;
  return p;
}

std::uint64_t session_seed(const RunConfig& cfg, int profile_id) {
  return derive_seed(stream_seed(cfg, SeedStream::kSessions), static_cast<std::uint64_t>(profile_id));
}

CsiEncoder<float> make_encoder(const RunConfig& cfg) {
  return CsiEncoder<float>(encoder_config(cfg), stream_seed(cfg, SeedStream::kEncoder));
}

ProjectionHead<float> make_projection(const RunConfig& cfg) {
  return ProjectionHead<float>(cfg.embedding_dim, cfg.projection_hidden, cfg.projection_dim,
                               stream_seed(cfg, SeedStream::kProjection));
}

ClassificationHead<float> make_head(const RunConfig& cfg) {
  return ClassificationHead<float>(cfg.embedding_dim, LabelSet::by_name(cfg.label_set).size(),
                                   stream_seed(cfg, SeedStream::kHead));
}

LoadedSession from_synth(const SynthSession& s, std::string split) {
  return {s.script.id, std::move(split), s.prepared, s.occupancy};
}

std::vector<LoadedSession> from_synth(const SynthDataset& data) {
  std::vector<LoadedSession> out;
  for (const auto& s : data.train) out.push_back(from_synth(s, "train"));
  for (const auto& s : data.val) out.push_back(from_synth(s, "val"));
  for (const auto& s : data.test) out.push_back(from_synth(s, "test"));
  return out;
}

void write_synth_dataset(const SynthDataset& data, int profile_id, const std::filesystem::path& dir,
                         const LabelSet& labels) {
  std::filesystem::create_directories(dir);
  std::string index = "session,split,profile\n";
  auto emit = [&](const std::vector<SynthSession>& sessions, const char* split) {
    for (const auto& s : sessions) {
      save_dataset(s.raw, dir / (s.script.id + ".csv"), labels);
      index += s.script.id + "," + split + "," + std::to_string(profile_id) + "\n";
    }
  };
  emit(data.train, "train");
  emit(data.val, "val");
  emit(data.test, "test");
  write_file_atomic(dir / "sessions.csv", index);
}

std::vector<LoadedSession> load_sessions(const std::filesystem::path& dir, const RunConfig& cfg,
                                         const std::vector<std::string>& splits) {
  const auto index_path = dir / "sessions.csv";
  std::istringstream in(read_file(index_path));
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::pair<std::string, std::string>> wanted;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      if (line != "session,split,profile") {
        throw DataFormatError(index_path.string() + ":1: expected header session,split,profile");
      }
      continue;
    }
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos) {
      throw DataFormatError(index_path.string() + ":" + std::to_string(line_no) + ": expected 3 columns");
    }
    std::string id = line.substr(0, c1), split = line.substr(c1 + 1, c2 - c1 - 1);
    if (splits.empty() || std::find(splits.begin(), splits.end(), split) != splits.end()) {
      wanted.emplace_back(std::move(id), std::move(split));
    }
  }

  const LabelSet labels = LabelSet::by_name(cfg.label_set);
  const CsiCsvOptions csv{cfg.channels, cfg.sample_rate_hz};
  const auto pre = preprocess_options(cfg);
  std::vector<LoadedSession> out(wanted.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(wanted.size()); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const CsiSeries raw = load_dataset(dir / (wanted[i].first + ".csv"), csv, labels);
    LoadedSession s{wanted[i].first, wanted[i].second, prepare_session(raw, pre), {}};
    if (labels.name == "doorway") {
      s.occupancy = occupancy_from_marks(raw, s.prepared.windows, labels.index_of("enter"), labels.index_of("exit"));
    }
    out[i] = std::move(s);
  }
  return out;
}

std::vector<Window> windows_of(const std::vector<LoadedSession>& sessions) {
  std::vector<Window> out;
  for (const auto& s : sessions) out.insert(out.end(), s.prepared.windows.begin(), s.prepared.windows.end());
  return out;
}

std::vector<LabeledWindow> labeled_of(const std::vector<LoadedSession>& sessions) {
  std::vector<LabeledWindow> out;
  for (const auto& s : sessions) out.insert(out.end(), s.prepared.labeled.begin(), s.prepared.labeled.end());
  return out;
}

std::vector<int> oracle_predictions(const LoadedSession& s, int background) {
  std::map<std::size_t, int> by_start;
  for (const auto& lw : s.prepared.labeled) by_start[lw.window.start_index] = lw.label;
  std::vector<int> out;
  out.reserve(s.prepared.windows.size());
  for (const auto& w : s.prepared.windows) {
    const auto it = by_start.find(w.start_index);
    out.push_back(it == by_start.end() ? background : it->second);
  }
  return out;
}

std::vector<SessionCount> count_sessions(EventClassifier<float>& model, const std::vector<LoadedSession>& sessions,
                                         const CounterConfig& counter) {
  std::vector<SessionCount> out;
  for (const auto& s : sessions) {
    const auto preds = predict(model, s.prepared.windows);
    out.push_back({s.id, run_trace(std::span<const int>(preds), counter).occupancy(), s.occupancy});
  }
  return out;
}

std::vector<SessionCount> count_sessions_oracle(const std::vector<LoadedSession>& sessions, int background,
                                                const CounterConfig& counter) {
  std::vector<SessionCount> out;
  for (const auto& s : sessions) {
    const auto preds = oracle_predictions(s, background);
    out.push_back({s.id, run_trace(std::span<const int>(preds), counter).occupancy(), s.occupancy});
  }
  return out;
}

CountingErrors pooled_counting_errors(const std::vector<SessionCount>& counts) {
  std::vector<int> est, truth;
  for (const auto& c : counts) {
    est.insert(est.end(), c.predicted.begin(), c.predicted.end());
    truth.insert(truth.end(), c.truth.begin(), c.truth.end());
  }
  return counting_errors(est, truth);
}

std::string counts_to_csv(const std::vector<SessionCount>& counts) {
  std::string out = "session,windows,final_predicted,final_truth,mae\n";
  for (const auto& c : counts) {
    const auto err = counting_errors(c.predicted, c.truth);
    out += c.session + "," + std::to_string(c.truth.size()) + "," +
           std::to_string(c.predicted.empty() ? 0 : c.predicted.back()) + "," +
           std::to_string(c.truth.empty() ? 0 : c.truth.back()) + "," + format_real(err.mae) + "\n";
  }
  return out;
}

SyntheticRun run_synthetic_pipeline(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.synth_split.size() != 3) throw std::invalid_argument("synth.split needs three ratios");
  const LabelSet labels = LabelSet::by_name(cfg.label_set);
  const auto data = generate_dataset(cfg.synth_sessions, domain_profile(cfg, cfg.synth_profile),
                                     {cfg.synth_split[0], cfg.synth_split[1], cfg.synth_split[2]},
                                     session_seed(cfg, cfg.synth_profile), synth_options(cfg));
  if (data.test.empty()) throw std::invalid_argument("the synthetic test split is empty");

  SyntheticRun run;
  auto encoder = make_encoder(cfg);
  auto projection = make_projection(cfg);
  run.pretrain_log =
      log_to_csv(pretrain_contrastive(encoder, projection, all_windows(data.train), pretrain_config(cfg),
                                      augment_policy(cfg)));

  EventClassifier<float> model{std::move(encoder), make_head(cfg)};
  const auto pool = labeled_windows(data.train);
  const auto split =
      sample_kshot(pool, labels.size(), static_cast<std::size_t>(cfg.k_shot), stream_seed(cfg, SeedStream::kKShot));
  std::vector<LabeledWindow> shots;
  for (auto i : split.train) shots.push_back(pool[i]);
  const auto adapted = finetune_classifier(model, shots, finetune_config(cfg));
  run.finetune_log = log_to_csv(adapted.log);
  run.params = adapted.counts;

  std::vector<Window> xs;
  std::vector<int> ys;
  for (const auto& lw : labeled_windows(data.test)) {
    xs.push_back(lw.window);
    ys.push_back(lw.label);
  }
  run.report = classification_metrics(predict(model, xs), ys, labels.size());
  std::vector<LoadedSession> test;
  for (const auto& s : data.test) test.push_back(from_synth(s, "test"));
  const auto counts = count_sessions(model, test, counter_config(cfg));
  run.counting = pooled_counting_errors(counts);
  run.report.mae = run.counting.mae;
  run.report.rmse = run.counting.rmse;
  run.metrics_csv = report_to_csv(run.report, labels.names);
  run.counts_csv = counts_to_csv(counts);

  run.checkpoint.config = cfg.to_text();
  run.checkpoint.provenance = "synthetic pipeline, profile " + std::to_string(cfg.synth_profile);
  export_encoder(run.checkpoint, model.encoder);
  export_params(run.checkpoint, kHeadSection, model.head.parameters());
  export_params(run.checkpoint, kProjectionSection, projection.parameters());
  return run;
}

}  // namespace csisense
