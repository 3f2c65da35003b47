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

// csisense: command-line driver for the doorway-counting pipeline.
//
//   csisense synth       generate scripted sessions into the data directory
//   csisense preprocess  filter, window and label; write per-session summaries
//   csisense pretrain    contrastive pre-training on the training split
//   csisense finetune    k-shot supervised adaptation of a pre-trained encoder
//   csisense probe       linear probe on frozen embeddings
//   csisense adda        adversarial adaptation to unlabeled target sessions
//   csisense count       run the occupancy counter over a split
//   csisense eval        classification and counting metrics on a split
//   csisense describe    layer listing with parameter counts
//
// Exit status: 0 ok, 1 runtime error, 2 usage error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csisense/checkpoint.hpp"
#include "csisense/csv_io.hpp"
#include "csisense/pipeline.hpp"

namespace fs = std::filesystem;
using namespace csisense;

namespace {

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string data_dir;
  std::string run_dir;
};

RunConfig resolve_config(const Common& c) {
  RunConfig cfg = c.config_path.empty() ? RunConfig{} : RunConfig::load(c.config_path);
  if (const char* v = std::getenv("CSISENSE_DATA_DIR")) cfg.data_dir = v;
  if (const char* v = std::getenv("CSISENSE_RUN_DIR")) cfg.run_dir = v;
  for (const auto& kv : c.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!c.data_dir.empty()) cfg.data_dir = c.data_dir;
  if (!c.run_dir.empty()) cfg.run_dir = c.run_dir;
  cfg.validate();
  parse_train_mode(cfg.finetune_mode);
  return cfg;
}

fs::path open_run_dir(const RunConfig& cfg) {
  const fs::path dir = cfg.run_dir;
  fs::create_directories(dir);
  write_file_atomic(dir / "config.resolved", cfg.to_text());
  return dir;
}

void write_output(const fs::path& path, const std::string& text) {
  write_file_atomic(path, text);
  std::cout << "wrote " << path.string() << "\n";
}

std::string params_to_csv(const ParamCounts& counts) {
  std::string out = "group,params\n";
  for (const auto& [group, n] : counts.by_group) out += group + "," + std::to_string(n) + "\n";
  out += "total," + std::to_string(counts.total) + "\ntrainable," + std::to_string(counts.trainable) + "\n";
  return out;
}

EventClassifier<float> model_from_checkpoint(const RunConfig& cfg, const Checkpoint& ckpt) {
  EventClassifier<float> model{make_encoder(cfg), make_head(cfg)};
  import_encoder(ckpt, model.encoder);
  if (ckpt.has_prefix(kHeadSection)) import_params(ckpt, kHeadSection, model.head.parameters());
  return model;
}

Checkpoint classifier_checkpoint(const RunConfig& cfg, const EventClassifier<float>& model, std::string provenance) {
  Checkpoint ckpt;
  ckpt.config = cfg.to_text();
  ckpt.provenance = std::move(provenance);
  export_encoder(ckpt, model.encoder);
  export_params(ckpt, kHeadSection, model.head.parameters());
  return ckpt;
}

std::vector<LabeledWindow> kshot_subset(const std::vector<LabeledWindow>& pool, const RunConfig& cfg) {
  const auto split = sample_kshot(pool, LabelSet::by_name(cfg.label_set).size(),
                                  static_cast<std::size_t>(cfg.k_shot), stream_seed(cfg, SeedStream::kKShot));
  std::vector<LabeledWindow> out;
  for (auto i : split.train) out.push_back(pool[i]);
  return out;
}

// ------------------------------------------------------------- commands

int cmd_synth(const RunConfig& cfg) {
  const LabelSet labels = LabelSet::by_name(cfg.label_set);
  const auto data = generate_dataset(cfg.synth_sessions, domain_profile(cfg, cfg.synth_profile),
                                     {cfg.synth_split[0], cfg.synth_split[1], cfg.synth_split[2]},
                                     session_seed(cfg, cfg.synth_profile), synth_options(cfg));
  write_synth_dataset(data, cfg.synth_profile, cfg.data_dir, labels);
  write_file_atomic(fs::path(cfg.data_dir) / "config.resolved", cfg.to_text());
  std::cout << "sessions: " << data.train.size() << " train, " << data.val.size() << " val, " << data.test.size()
            << " test in " << cfg.data_dir << "\n"
            << "training windows per class: enter " << data.train_class_counts[0] << ", exit "
            << data.train_class_counts[1] << ", no_event " << data.train_class_counts[2] << "\n";
  return 0;
}

int cmd_preprocess(const RunConfig& cfg) {
  const auto dir = open_run_dir(cfg);
  const LabelSet labels = LabelSet::by_name(cfg.label_set);
  const auto sessions = load_sessions(cfg.data_dir, cfg);
  std::string summary = "session,split,windows,labeled";
  for (const auto& n : labels.names) summary += "," + n;
  summary += "\n";
  for (const auto& s : sessions) {
    std::vector<std::size_t> per_class(labels.size(), 0);
    std::string rows = "window_index,start_index,label\n";
    for (const auto& lw : s.prepared.labeled) {
      ++per_class[static_cast<std::size_t>(lw.label)];
    }
    for (std::size_t i = 0; i < s.prepared.windows.size(); ++i) {
      rows += std::to_string(i) + "," + std::to_string(s.prepared.windows[i].start_index) + ",";
      for (const auto& lw : s.prepared.labeled) {
        if (lw.window.start_index == s.prepared.windows[i].start_index) {
          rows += labels.names[static_cast<std::size_t>(lw.label)];
          break;
        }
      }
      rows += "\n";
    }
    write_file_atomic(dir / (s.id + ".windows.csv"), rows);
    summary += s.id + "," + s.split + "," + std::to_string(s.prepared.windows.size()) + "," +
               std::to_string(s.prepared.labeled.size());
    for (auto n : per_class) summary += "," + std::to_string(n);
    summary += "\n";
  }
  write_file_atomic(dir / "filter.sos.txt", design_butterworth(preprocess_options(cfg).filter).to_text());
  write_output(dir / "preprocess.csv", summary);
  return 0;
}

int cmd_pretrain(const RunConfig& cfg) {
  const auto dir = open_run_dir(cfg);
  const auto train = load_sessions(cfg.data_dir, cfg, {"train"});
  auto encoder = make_encoder(cfg);
  auto projection = make_projection(cfg);
  const auto log = pretrain_contrastive(encoder, projection, windows_of(train), pretrain_config(cfg),
                                        augment_policy(cfg));
  Checkpoint ckpt;
  ckpt.config = cfg.to_text();
  ckpt.provenance = "pretrain";
  export_encoder(ckpt, encoder);
  export_params(ckpt, kProjectionSection, projection.parameters());
  save_checkpoint(ckpt, dir / "pretrain.ckpt");
  write_output(dir / "pretrain_log.csv", log_to_csv(log));
  std::cout << "final contrastive loss " << format_real(log.empty() ? 0.0 : log.back().loss) << "\n";
  return 0;
}

int cmd_finetune(const RunConfig& cfg, const std::string& from) {
  const auto dir = open_run_dir(cfg);
  const auto parent = load_checkpoint(from);
  auto model = model_from_checkpoint(cfg, parent);
  const auto shots = kshot_subset(labeled_of(load_sessions(cfg.data_dir, cfg, {"train"})), cfg);
  const auto result = finetune_classifier(model, shots, finetune_config(cfg));
  save_checkpoint(classifier_checkpoint(cfg, model, "finetune " + cfg.finetune_mode + " from " + from),
                  dir / "finetune.ckpt");
  write_output(dir / "finetune_log.csv", log_to_csv(result.log));
  write_output(dir / "params.csv", params_to_csv(result.counts));
  std::cout << "trainable parameters " << result.counts.trainable << " of " << result.counts.total << "\n";
  return 0;
}

int cmd_probe(const RunConfig& cfg, const std::string& from) {
  const auto dir = open_run_dir(cfg);
  const auto parent = load_checkpoint(from);
  auto model = model_from_checkpoint(cfg, parent);
  const auto shots = kshot_subset(labeled_of(load_sessions(cfg.data_dir, cfg, {"train"})), cfg);
  const auto result = linear_probe(model, shots, probe_config(cfg));
  save_checkpoint(classifier_checkpoint(cfg, model, "probe from " + from), dir / "probe.ckpt");
  write_output(dir / "probe_log.csv", log_to_csv(result.log));
  write_output(dir / "params.csv", params_to_csv(result.counts));
  std::cout << "trainable parameters " << result.counts.trainable << " of " << result.counts.total << "\n";
  return 0;
}

int cmd_adda(const RunConfig& cfg, const std::string& from, const std::string& target_dir) {
  const auto dir = open_run_dir(cfg);
  const auto parent = load_checkpoint(from);
  auto source = make_encoder(cfg);
  import_encoder(parent, source);
  const auto src = load_sessions(cfg.data_dir, cfg, {"train"});
  const auto tgt = load_sessions(target_dir, cfg, {"train"});
  auto result = adda_adapt(source, windows_of(src), windows_of(tgt), adda_config(cfg));

  Checkpoint ckpt;
  ckpt.config = cfg.to_text();
  ckpt.provenance = "adda from " + from + " to " + target_dir;
  export_encoder(ckpt, result.target);
  for (const auto& [name, blob] : parent.section(kHeadSection)) ckpt.add(name, blob);
  export_params(ckpt, kDiscriminatorSection, result.discriminator.parameters());
  save_checkpoint(ckpt, dir / "adda.ckpt");
  write_output(dir / "adda_log.csv", log_to_csv(result.log));

  const auto src_test = load_sessions(cfg.data_dir, cfg, {"test"});
  const auto tgt_test = load_sessions(target_dir, cfg, {"test"});
  if (!src_test.empty() && !tgt_test.empty()) {
    const auto es = embed_windows(source, windows_of(src_test));
    const double before = domain_probe_accuracy(es, embed_windows(source, windows_of(tgt_test)), cfg.seed);
    const double after = domain_probe_accuracy(es, embed_windows(result.target, windows_of(tgt_test)), cfg.seed);
    write_output(dir / "domain_probe.csv",
                 "stage,accuracy\nbefore," + format_real(before) + "\nafter," + format_real(after) + "\n");
  }
  return 0;
}

int cmd_count(const RunConfig& cfg, const std::string& from, bool oracle, const std::string& split) {
  const auto dir = open_run_dir(cfg);
  const LabelSet labels = LabelSet::by_name(cfg.label_set);
  if (labels.name != "doorway") throw std::invalid_argument("counting needs the doorway label set");
  const auto sessions = load_sessions(cfg.data_dir, cfg, {split});
  std::vector<SessionCount> counts;
  if (oracle) {
    counts = count_sessions_oracle(sessions, labels.background.value_or(2), counter_config(cfg));
  } else {
    if (from.empty()) throw std::invalid_argument("count needs --from <checkpoint> or --oracle");
    auto model = model_from_checkpoint(cfg, load_checkpoint(from));
    counts = count_sessions(model, sessions, counter_config(cfg));
  }
  write_output(dir / "counts.csv", counts_to_csv(counts));
  const auto err = pooled_counting_errors(counts);
  std::cout << "occupancy mae " << format_real(err.mae) << " rmse " << format_real(err.rmse) << "\n";
  return 0;
}

int cmd_eval(const RunConfig& cfg, const std::string& from, const std::string& split) {
  const auto dir = open_run_dir(cfg);
  const LabelSet labels = LabelSet::by_name(cfg.label_set);
  auto model = model_from_checkpoint(cfg, load_checkpoint(from));
  const auto sessions = load_sessions(cfg.data_dir, cfg, {split});
  std::vector<Window> xs;
  std::vector<int> ys;
  for (const auto& lw : labeled_of(sessions)) {
    xs.push_back(lw.window);
    ys.push_back(lw.label);
  }
  auto report = classification_metrics(predict(model, xs), ys, labels.size());
  if (labels.name == "doorway") {
    const auto counts = count_sessions(model, sessions, counter_config(cfg));
    const auto err = pooled_counting_errors(counts);
    report.mae = err.mae;
    report.rmse = err.rmse;
    write_output(dir / "counts.csv", counts_to_csv(counts));
  }
  write_output(dir / "metrics.csv", report_to_csv(report, labels.names));
  std::cout << report_to_table(report, labels.names);
  return 0;
}

int cmd_describe(const RunConfig& cfg, const std::optional<std::string>& mode, std::size_t classes) {
  const auto enc_cfg = encoder_config(cfg);
  std::cout << format_layer_table(describe_encoder(enc_cfg));
  if (mode) {
    EventClassifier<float> model{CsiEncoder<float>(enc_cfg, 0), ClassificationHead<float>(cfg.embedding_dim, classes, 0)};
    const auto mask = set_trainable(model, parse_train_mode(*mode));
    const auto counts = count_params(model.parameters(), &mask);
    std::cout << "Trainable parameters (" << *mode << ", " << classes << " classes): " << counts.trainable << " of "
              << counts.total << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"WiFi CSI doorway event classification and occupancy counting", "csisense"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", common.config_path, "key=value run configuration file")->check(CLI::ExistingFile);
    sub->add_option("-s,--set", common.overrides, "override one key (key=value); repeatable");
    sub->add_option("--data-dir", common.data_dir, "session directory (env CSISENSE_DATA_DIR)");
    sub->add_option("--run-dir", common.run_dir, "output directory (env CSISENSE_RUN_DIR)");
  };

  std::string from, target_dir, split = "test";
  bool oracle = false;
  std::optional<std::string> describe_mode;
  std::size_t describe_classes = 3;

  auto* synth = app.add_subcommand("synth", "generate scripted synthetic sessions");
  auto* preprocess = app.add_subcommand("preprocess", "filter, window and label every session");
  auto* pretrain = app.add_subcommand("pretrain", "contrastive pre-training on the training split");
  auto* finetune = app.add_subcommand("finetune", "k-shot supervised adaptation");
  auto* probe = app.add_subcommand("probe", "linear probe on frozen embeddings");
  auto* adda = app.add_subcommand("adda", "adversarial adaptation to a target session directory");
  auto* count = app.add_subcommand("count", "occupancy counting over a split");
  auto* eval = app.add_subcommand("eval", "classification and counting metrics over a split");
  auto* describe = app.add_subcommand("describe", "layer listing with parameter counts");
  for (auto* sub : {synth, preprocess, pretrain, finetune, probe, adda, count, eval, describe}) add_common(sub);
  for (auto* sub : {finetune, probe, adda, eval}) sub->add_option("--from", from, "parent checkpoint")->required();
  count->add_option("--from", from, "classifier checkpoint");
  count->add_flag("--oracle", oracle, "use ground-truth window labels instead of a classifier");
  for (auto* sub : {count, eval}) sub->add_option("--split", split, "train, val or test")->check(CLI::IsMember({"train", "val", "test"}));
  adda->add_option("--target-data", target_dir, "directory of target-domain sessions")->required();
  describe->add_option("--mode", describe_mode, "also report trainable parameters for this adaptation mode");
  describe->add_option("--classes", describe_classes, "head size for --mode")->check(CLI::PositiveNumber);

  if (argc <= 1) {
    std::cerr << app.help();
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 2;
  }

  try {
    const RunConfig cfg = resolve_config(common);
    if (*synth) return cmd_synth(cfg);
    if (*preprocess) return cmd_preprocess(cfg);
    if (*pretrain) return cmd_pretrain(cfg);
    if (*finetune) return cmd_finetune(cfg, from);
    if (*probe) return cmd_probe(cfg, from);
    if (*adda) return cmd_adda(cfg, from, target_dir);
    if (*count) return cmd_count(cfg, from, oracle, split);
    if (*eval) return cmd_eval(cfg, from, split);
    if (*describe) return cmd_describe(cfg, describe_mode, describe_classes);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
