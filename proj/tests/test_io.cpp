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
#include <filesystem>

#include "csisense/checkpoint.hpp"
#include "csisense/config.hpp"
#include "csisense/csv_io.hpp"
#include "csisense/pipeline.hpp"
#include "csisense/synth.hpp"
#include "test_util.hpp"

using namespace csisense;
namespace fs = std::filesystem;

namespace {

// Bitwise CRC-32 (reflected, polynomial 0xEDB88320).
std::uint32_t crc32_ref(std::string_view bytes) {
  std::uint32_t crc = 0xFFFFFFFFu;
  for (unsigned char b : bytes) {
    crc ^= b;
    for (int k = 0; k < 8; ++k) crc = (crc >> 1) ^ (0xEDB88320u & (0u - (crc & 1u)));
  }
  return ~crc;
}

void reseal(std::string& bytes) {
  const auto crc = crc32_ref(std::string_view(bytes).substr(0, bytes.size() - 4));
  for (int i = 0; i < 4; ++i) bytes[bytes.size() - 4 + i] = static_cast<char>((crc >> (8 * i)) & 0xFF);
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

Checkpoint sample_checkpoint() {
  Checkpoint c;
  c.config = "seed=1\n";
  c.provenance = "stage=test\n";
  Rng rng(1);
  c.add("encoder.a", csisense::testing::random_tensor<float>({3, 4}, rng));
  c.add("head.b", csisense::testing::random_tensor<float>({5}, rng));
  return c;
}

}  // namespace

TEST_CASE("CSI CSV round trip is exact") {
  ScenarioScript script;
  script.duration_s = 20;
  script.events = {{5, EventLabel::kEnter}};
  const auto s = generate_series(script, DomainProfile::make(0), 1);
  CsiCsvOptions opts;
  const auto back = csi_from_csv(csi_to_csv(s), opts);
  CHECK(back.amplitudes == s.amplitudes);
  CHECK(back.timestamps == s.timestamps);
  const auto marks = events_from_csv(events_to_csv(s, LabelSet::doorway()), LabelSet::doorway());
  REQUIRE(marks.size() == 1);
  CHECK(marks[0].timestamp == s.marks[0].timestamp);
  CHECK(marks[0].label == s.marks[0].label);
}

TEST_CASE("malformed CSV names the line") {
  CsiCsvOptions opts;
  opts.channels = 2;
  CHECK_THROWS_AS(csi_from_csv("", opts), DataFormatError);
  CHECK_THROWS_AS(csi_from_csv("timestamp,sc_0\n", opts), DataFormatError);
  try {
    csi_from_csv("timestamp,sc_0,sc_1\n1,2,3\n2,x,4\n", opts, "f.csv");
    FAIL("expected a parse error");
  } catch (const DataFormatError& e) {
    CHECK(std::string(e.what()).find("f.csv:3") != std::string::npos);
  }
  CHECK_THROWS_AS(csi_from_csv("timestamp,sc_0,sc_1\n2,2,3\n1,1,4\n", opts), DataFormatError);
  CHECK_THROWS_AS(csi_from_csv("timestamp,sc_0,sc_1\n1,2\n", opts), DataFormatError);
  CHECK_THROWS_AS(events_from_csv("timestamp,label\n1,jump\n", LabelSet::doorway()), DataFormatError);
  CHECK(events_path_for("a/b.csv") == fs::path("a/b.events.csv"));
}

TEST_CASE("checkpoint round trip and corruption") {
  const auto c = sample_checkpoint();
  const auto bytes = serialize_checkpoint(c);
  const auto back = parse_checkpoint(bytes);
  CHECK(back.config == c.config);
  CHECK(back.provenance == c.provenance);
  CHECK(serialize_checkpoint(back) == bytes);
  CHECK(back.find("head.b")->to_vector() == c.find("head.b")->to_vector());
  CHECK(back.section("encoder.").size() == 1);
  CHECK(back.has_prefix("head."));
  CHECK(back.find("missing") == nullptr);

  for (std::size_t i = 0; i < bytes.size(); i += 7) {
    auto bad = bytes;
    bad[i] = static_cast<char>(bad[i] ^ 0x20);
    CHECK_THROWS_AS(parse_checkpoint(bad), CheckpointError);
  }
  CHECK_THROWS_AS(parse_checkpoint(bytes.substr(0, bytes.size() - 1)), CheckpointError);
  CHECK_THROWS_AS(parse_checkpoint(""), CheckpointError);

  auto future = bytes;
  future[4] = 2;
  reseal(future);
  try {
    parse_checkpoint(future);
    FAIL("expected a version error");
  } catch (const CheckpointError& e) {
    CHECK(std::string(e.what()).find("version") != std::string::npos);
  }
  auto dup = sample_checkpoint();
  CHECK_THROWS_AS(dup.add("head.b", *c.find("head.b")), CheckpointError);
}

TEST_CASE("encoder export and import reproduce the forward pass") {
  EncoderConfig cfg;
  cfg.layer_channels = {16, 32, 64};
  CsiEncoder<float> enc(cfg, 3);
  Rng rng(4);
  const auto x = csisense::testing::random_tensor<float>({2, 52, 100}, rng);
  Checkpoint c;
  export_encoder(c, enc);
  const auto loaded = parse_checkpoint(serialize_checkpoint(c));
  CsiEncoder<float> other(cfg, 99);
  import_encoder(loaded, other);
  Graph<float> g(false);
  CHECK(enc.forward(g, x, Mode::kEval).to_vector() == other.forward(g, x, Mode::kEval).to_vector());
  CHECK(section_bytes(loaded, kEncoderSection) == section_bytes(c, kEncoderSection));

  EncoderConfig wide;
  CsiEncoder<float> mismatched(wide, 1);
  CHECK_THROWS_AS(import_encoder(loaded, mismatched), CheckpointError);
}

TEST_CASE("config text round trip and errors") {
  RunConfig cfg;
  cfg.set("seed", "42");
  cfg.set("model.layer_channels", "16,32,64");
  cfg.set("synth.split", "0.6,0.2,0.2");
  CHECK(RunConfig::parse(cfg.to_text()) == cfg);
  CHECK(RunConfig::parse("# comment\n\nseed=5\n").seed == 5);
  CHECK_THROWS_AS(RunConfig::parse("nonsense_key=1\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("seed\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("seed=abc\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("config.version=2\n"), ConfigError);
  try {
    RunConfig::parse("seed=1\nseed=x\n");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  RunConfig wiar = RunConfig::parse("finetune.preset=wiar\n");
  CHECK(wiar.finetune_epochs == 75);
  CHECK(wiar.finetune_loss == "focal");
  RunConfig over = RunConfig::parse("finetune.epochs=3\nfinetune.preset=wiar\n");
  CHECK(over.finetune_epochs == 3);
  RunConfig bad;
  bad.synth_split = {0.5, 0.5, 0.5};
  CHECK_THROWS(bad.validate());
}

TEST_CASE("synthetic sessions survive a write and reload") {
  TempDir dir("csisense_io_test");
  RunConfig cfg;
  cfg.synth_sessions = 3;
  cfg.synth_split = {1.0, 0.0, 0.0};
  const auto data = generate_dataset(3, domain_profile(cfg, 0), {1.0, 0.0, 0.0}, session_seed(cfg, 0), synth_options(cfg));
  write_synth_dataset(data, 0, dir.path, LabelSet::doorway());
  const auto loaded = load_sessions(dir.path, cfg);
  const auto direct = from_synth(data);
  REQUIRE(loaded.size() == direct.size());
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    CHECK(loaded[i].id == direct[i].id);
    CHECK(loaded[i].occupancy == direct[i].occupancy);
    CHECK(loaded[i].prepared.labeled.size() == direct[i].prepared.labeled.size());
    CHECK(windows_of({loaded[i]}).front().values == windows_of({direct[i]}).front().values);
  }
  const auto counts = count_sessions_oracle(loaded, 2, counter_config(cfg));
  CHECK(pooled_counting_errors(counts).mae == 0.0);
}
