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

#include "csisense/checkpoint.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <map>

#include <zlib.h>

#include "csisense/csv_io.hpp"

namespace csisense {

namespace {

constexpr char kMagic[4] = {'C', 'S', 'I', 'S'};

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
void put_text(std::string& out, std::string_view s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.append(s);
}

std::uint32_t crc_of(std::string_view bytes) {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size())));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  std::uint64_t uint(int width) {
    need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + static_cast<std::size_t>(i)])) << (8 * i);
    }
    pos_ += static_cast<std::size_t>(width);
    return v;
  }
  std::string text() {
    const auto n = static_cast<std::size_t>(uint(4));
    need(n);
    std::string s(bytes_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw CheckpointError("checkpoint is truncated");
  }
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

void put_blob_values(std::string& out, const Tensor<float>& t) {
  for (const float v : t.data()) put_u32(out, std::bit_cast<std::uint32_t>(v));
}

}  // namespace

const Tensor<float>* Checkpoint::find(std::string_view name) const {
  for (const auto& [n, t] : blobs)
    if (n == name) return &t;
  return nullptr;
}

bool Checkpoint::has_prefix(std::string_view prefix) const {
  return std::any_of(blobs.begin(), blobs.end(), [&](const auto& b) { return b.first.starts_with(prefix); });
}

std::vector<std::pair<std::string, Tensor<float>>> Checkpoint::section(std::string_view prefix) const {
  std::vector<std::pair<std::string, Tensor<float>>> out;
  for (const auto& [n, t] : blobs)
    if (n.starts_with(prefix)) out.emplace_back(n.substr(prefix.size()), t);
  return out;
}

void Checkpoint::add(std::string name, const Tensor<float>& value) {
  if (find(name)) throw CheckpointError("duplicate checkpoint blob '" + name + "'");
  blobs.emplace_back(std::move(name), Tensor<float>(value.shape(), value.to_vector()));
}

std::string serialize_checkpoint(const Checkpoint& ckpt) {
  std::string out(kMagic, 4);
  put_u32(out, kCheckpointVersion);
  put_text(out, ckpt.config);
  put_text(out, ckpt.provenance);
  put_u32(out, static_cast<std::uint32_t>(ckpt.blobs.size()));
  for (const auto& [name, t] : ckpt.blobs) {
    put_text(out, name);
    put_u32(out, static_cast<std::uint32_t>(t.rank()));
    for (const auto d : t.shape()) put_u64(out, d);
    put_blob_values(out, t);
  }
  put_u32(out, crc_of(out));
  return out;
}

Checkpoint parse_checkpoint(std::string_view bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw CheckpointError("not a checkpoint file (bad magic)");
  }
  const std::string_view body = bytes.substr(0, bytes.size() - 4);
  Reader tail(bytes.substr(bytes.size() - 4));
  const auto stored = static_cast<std::uint32_t>(tail.uint(4));
  if (stored != crc_of(body)) throw CheckpointError("checkpoint checksum mismatch (file is corrupted)");

  Reader r(body.substr(4));
  const auto version = static_cast<std::uint32_t>(r.uint(4));
  if (version != kCheckpointVersion) {
    throw CheckpointError("checkpoint version " + std::to_string(version) + " is not supported (expected " +
                          std::to_string(kCheckpointVersion) + ")");
  }
  Checkpoint ckpt;
  ckpt.config = r.text();
  ckpt.provenance = r.text();
  const auto count = r.uint(4);
  for (std::uint64_t b = 0; b < count; ++b) {
    std::string name = r.text();
    const auto rank = r.uint(4);
    Shape shape;
    for (std::uint64_t i = 0; i < rank; ++i) shape.push_back(static_cast<std::size_t>(r.uint(8)));
    const std::size_t n = shape_numel(shape);
    if (n > r.remaining() / 4) throw CheckpointError("checkpoint is truncated");
    std::vector<float> values(n);
    for (auto& v : values) v = std::bit_cast<float>(static_cast<std::uint32_t>(r.uint(4)));
    ckpt.blobs.emplace_back(std::move(name), Tensor<float>(shape, std::move(values)));
  }
  if (r.remaining() != 0) throw CheckpointError("trailing bytes after checkpoint blobs");
  return ckpt;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_checkpoint(ckpt));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return parse_checkpoint(read_file(path));
}

void export_params(Checkpoint& ckpt, std::string_view prefix, const std::vector<NamedParam<float>>& params) {
  for (const auto& p : params) ckpt.add(std::string(prefix) + p.path, p.tensor);
}

void import_params(const Checkpoint& ckpt, std::string_view prefix, std::vector<NamedParam<float>> params) {
  for (auto& p : params) {
    const std::string name = std::string(prefix) + p.path;
    const auto* blob = ckpt.find(name);
    if (!blob) throw CheckpointError("checkpoint has no blob '" + name + "'");
    if (blob->shape() != p.tensor.shape()) {
      throw CheckpointError("blob '" + name + "' has shape " + shape_str(blob->shape()) + ", model expects " +
                            shape_str(p.tensor.shape()));
    }
    auto dst = p.tensor.data();
    const auto src = blob->data();
    std::copy(src.begin(), src.end(), dst.begin());
  }
}

void export_encoder(Checkpoint& ckpt, const CsiEncoder<float>& encoder) {
  export_params(ckpt, kEncoderSection, encoder.parameters());
  export_params(ckpt, kEncoderSection, encoder.buffers());
}

void import_encoder(const Checkpoint& ckpt, CsiEncoder<float>& encoder) {
  import_params(ckpt, kEncoderSection, encoder.parameters());
  import_params(ckpt, kEncoderSection, encoder.buffers());
}

std::string section_bytes(const Checkpoint& ckpt, std::string_view prefix) {
  std::map<std::string, const Tensor<float>*> sorted;
  for (const auto& [n, t] : ckpt.blobs)
    if (n.starts_with(prefix)) sorted[n] = &t;
  std::string out;
  for (const auto& [n, t] : sorted) {
    put_text(out, n);
    put_blob_values(out, *t);
  }
  return out;
}

}  // namespace csisense
