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

#include "csisense/model.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace csisense {

namespace {

template <typename T>
void fill_uniform(Tensor<T>& t, double bound, Rng& rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (auto& v : t.data()) v = static_cast<T>(dist(rng));
}

std::string dim_str(std::size_t channels, std::size_t len) {
  return std::to_string(channels) + " x " + std::to_string(len);
}

std::string with_commas(std::size_t n) {
  std::string s = std::to_string(n);
  for (int i = static_cast<int>(s.size()) - 3; i > 0; i -= 3) s.insert(static_cast<std::size_t>(i), ",");
  return s;
}

}  // namespace

void EncoderConfig::validate() const {
  if (in_channels == 0 || window_len == 0) throw std::invalid_argument("encoder input shape must be positive");
  if (layer_channels.empty()) throw std::invalid_argument("encoder needs at least one layer");
  if (blocks_per_layer == 0) throw std::invalid_argument("blocks_per_layer must be >= 1");
  if (adapter_bottleneck == 0) throw std::invalid_argument("adapter bottleneck must be >= 1");
  if (embedding_dim == 0) throw std::invalid_argument("embedding_dim must be >= 1");
  for (auto c : layer_channels) {
    if (c == 0) throw std::invalid_argument("layer channel counts must be positive");
    if (se_enabled && (se_reduction == 0 || c % se_reduction != 0 || c / se_reduction == 0)) {
      throw std::invalid_argument("SE reduction " + std::to_string(se_reduction) +
                                  " does not divide layer width " + std::to_string(c));
    }
  }
}

// ---------------------------------------------------------------- layers

template <typename T>
Conv1dLayer<T>::Conv1dLayer(std::size_t in_ch, std::size_t out_ch, std::size_t kernel,
                            std::size_t stride_, std::size_t padding_)
    : weight(Shape{out_ch, in_ch, kernel}), bias(Shape{out_ch}), stride(stride_), padding(padding_) {}

template <typename T>
Tensor<T> Conv1dLayer<T>::forward(Graph<T>& g, const Tensor<T>& x) const {
  return conv1d(g, x, weight, bias, stride, padding);
}

template <typename T>
void Conv1dLayer<T>::init(Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(weight.dim(1) * weight.dim(2)));
  fill_uniform(weight, bound, rng);
  fill_uniform(bias, bound, rng);
}

template <typename T>
void Conv1dLayer<T>::collect(const std::string& prefix, ParamRole role,
                             std::vector<NamedParam<T>>& out) const {
  out.push_back({prefix + ".weight", weight, role});
  out.push_back({prefix + ".bias", bias, role});
}

template <typename T>
BatchNorm1dLayer<T>::BatchNorm1dLayer(std::size_t channels)
    : gamma(Shape{channels}, std::vector<T>(channels, T{1})), beta(Shape{channels}), stats(channels) {}

template <typename T>
Tensor<T> BatchNorm1dLayer<T>::forward(Graph<T>& g, const Tensor<T>& x, Mode mode) {
  return batchnorm1d(g, x, gamma, beta, stats, frozen ? Mode::kEval : mode);
}

template <typename T>
void BatchNorm1dLayer<T>::collect(const std::string& prefix, ParamRole role,
                                  std::vector<NamedParam<T>>& params) const {
  params.push_back({prefix + ".gamma", gamma, role});
  params.push_back({prefix + ".beta", beta, role});
}

template <typename T>
void BatchNorm1dLayer<T>::collect_buffers(const std::string& prefix,
                                          std::vector<NamedParam<T>>& buffers) const {
  buffers.push_back({prefix + ".running_mean", stats.mean, ParamRole::kBackbone});
  buffers.push_back({prefix + ".running_var", stats.var, ParamRole::kBackbone});
}

template <typename T>
LinearLayer<T>::LinearLayer(std::size_t in_features, std::size_t out_features)
    : weight(Shape{out_features, in_features}), bias(Shape{out_features}) {}

template <typename T>
Tensor<T> LinearLayer<T>::forward(Graph<T>& g, const Tensor<T>& x) const {
  return linear(g, x, weight, bias);
}

template <typename T>
void LinearLayer<T>::init(Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(weight.dim(1)));
  fill_uniform(weight, bound, rng);
  fill_uniform(bias, bound, rng);
}

template <typename T>
void LinearLayer<T>::collect(const std::string& prefix, ParamRole role,
                             std::vector<NamedParam<T>>& out) const {
  out.push_back({prefix + ".weight", weight, role});
  out.push_back({prefix + ".bias", bias, role});
}

// ------------------------------------------------------------- SE / adapter

template <typename T>
SEBlock<T>::SEBlock(std::size_t channels, std::size_t reduction)
    : w1(Shape{channels / reduction, channels}),
      w2(Shape{channels, channels / reduction}),
      zero_hidden_(Shape{channels / reduction}),
      zero_out_(Shape{channels}) {}

template <typename T>
Tensor<T> SEBlock<T>::forward(Graph<T>& g, const Tensor<T>& u) const {
  const auto z = global_avg_pool1d(g, u);
  const auto h = relu(g, linear(g, z, w1, zero_hidden_));
  const auto s = sigmoid(g, linear(g, h, w2, zero_out_));
  return channel_scale(g, u, s);
}

template <typename T>
void SEBlock<T>::init(Rng& rng) {
  fill_uniform(w1, 1.0 / std::sqrt(static_cast<double>(w1.dim(1))), rng);
  fill_uniform(w2, 1.0 / std::sqrt(static_cast<double>(w2.dim(1))), rng);
}

template <typename T>
void SEBlock<T>::collect(const std::string& prefix, std::vector<NamedParam<T>>& out) const {
  out.push_back({prefix + ".w1", w1, ParamRole::kBackbone});
  out.push_back({prefix + ".w2", w2, ParamRole::kBackbone});
}

template <typename T>
Adapter<T>::Adapter(std::size_t channels, std::size_t bottleneck)
    : down(channels, bottleneck, 1, 1, 0), up(bottleneck, channels, 1, 1, 0) {}

template <typename T>
Tensor<T> Adapter<T>::forward(Graph<T>& g, const Tensor<T>& x) const {
  return add(g, up.forward(g, relu(g, down.forward(g, x))), x);
}

template <typename T>
void Adapter<T>::init(Rng& rng) {
  down.init(rng);
  for (auto& v : up.weight.data()) v = T{0};
  for (auto& v : up.bias.data()) v = T{0};
}

template <typename T>
void Adapter<T>::collect(const std::string& prefix, std::vector<NamedParam<T>>& out) const {
  down.collect(prefix + ".down", ParamRole::kAdapter, out);
  up.collect(prefix + ".up", ParamRole::kAdapter, out);
}

// ---------------------------------------------------------- residual block

template <typename T>
ResidualBlock<T>::ResidualBlock(std::size_t in_ch, std::size_t out_ch, std::size_t stride,
                                const EncoderConfig& cfg)
    : conv1(in_ch, out_ch, 3, stride, 1), bn1(out_ch), conv2(out_ch, out_ch, 3, 1, 1), bn2(out_ch) {
  if (cfg.se_enabled) se.emplace(out_ch, cfg.se_reduction);
  if (cfg.adapters_enabled) adapter.emplace(out_ch, cfg.adapter_bottleneck);
  if (stride != 1 || in_ch != out_ch) {
    shortcut_conv.emplace(in_ch, out_ch, 1, stride, 0);
    shortcut_bn.emplace(out_ch);
  }
}

template <typename T>
Tensor<T> ResidualBlock<T>::forward(Graph<T>& g, const Tensor<T>& x, Mode mode) {
  auto out = relu(g, bn1.forward(g, conv1.forward(g, x), mode));
  out = bn2.forward(g, conv2.forward(g, out), mode);
  if (se) out = se->forward(g, out);
  if (adapter) out = adapter->forward(g, out);
  const auto identity =
      shortcut_conv ? shortcut_bn->forward(g, shortcut_conv->forward(g, x), mode) : x;
  return relu(g, add(g, out, identity));
}

template <typename T>
void ResidualBlock<T>::init(Rng& rng) {
  conv1.init(rng);
  conv2.init(rng);
  if (se) se->init(rng);
  if (adapter) adapter->init(rng);
  if (shortcut_conv) shortcut_conv->init(rng);
}

template <typename T>
void ResidualBlock<T>::collect(const std::string& prefix, std::vector<NamedParam<T>>& out) const {
  conv1.collect(prefix + ".conv1", ParamRole::kBackbone, out);
  bn1.collect(prefix + ".bn1", ParamRole::kBackbone, out);
  conv2.collect(prefix + ".conv2", ParamRole::kBackbone, out);
  bn2.collect(prefix + ".bn2", ParamRole::kBackbone, out);
  if (se) se->collect(prefix + ".se", out);
  if (adapter) adapter->collect(prefix + ".adapter", out);
  if (shortcut_conv) {
    shortcut_conv->collect(prefix + ".shortcut.conv", ParamRole::kBackbone, out);
    shortcut_bn->collect(prefix + ".shortcut.bn", ParamRole::kBackbone, out);
  }
}

template <typename T>
void ResidualBlock<T>::collect_buffers(const std::string& prefix, std::vector<NamedParam<T>>& out) const {
  bn1.collect_buffers(prefix + ".bn1", out);
  bn2.collect_buffers(prefix + ".bn2", out);
  if (shortcut_bn) shortcut_bn->collect_buffers(prefix + ".shortcut.bn", out);
}

template <typename T>
std::vector<std::pair<std::string, BatchNorm1dLayer<T>*>> ResidualBlock<T>::batchnorms(
    const std::string& prefix) {
  std::vector<std::pair<std::string, BatchNorm1dLayer<T>*>> out{{prefix + ".bn1", &bn1},
                                                                {prefix + ".bn2", &bn2}};
  if (shortcut_bn) out.emplace_back(prefix + ".shortcut.bn", &*shortcut_bn);
  return out;
}

// ----------------------------------------------------------------- encoder

template <typename T>
CsiEncoder<T>::CsiEncoder(const EncoderConfig& cfg, std::uint64_t seed) : cfg_(cfg) {
  cfg_.validate();
  const std::size_t stem = cfg_.layer_channels.front();
  stem_conv = Conv1dLayer<T>(cfg_.in_channels, stem, 7, 2, 3);
  stem_bn = BatchNorm1dLayer<T>(stem);
  std::size_t in_ch = stem;
  for (std::size_t li = 0; li < cfg_.layer_channels.size(); ++li) {
    const std::size_t out_ch = cfg_.layer_channels[li];
    std::vector<ResidualBlock<T>> blocks;
    for (std::size_t bi = 0; bi < cfg_.blocks_per_layer; ++bi) {
      const std::size_t stride = (li > 0 && bi == 0) ? 2 : 1;
      blocks.emplace_back(in_ch, out_ch, stride, cfg_);
      in_ch = out_ch;
    }
    layers.push_back(std::move(blocks));
  }
  fc = LinearLayer<T>(in_ch, cfg_.embedding_dim);

  Rng rng(seed);
  stem_conv.init(rng);
  for (auto& layer : layers)
    for (auto& block : layer) block.init(rng);
  fc.init(rng);
}

template <typename T>
Tensor<T> CsiEncoder<T>::forward(Graph<T>& g, const Tensor<T>& x, Mode mode, EncoderTrace* trace) {
  if (x.rank() != 3 || x.dim(1) != cfg_.in_channels || x.dim(2) != cfg_.window_len) {
    throw ShapeError("encoder expects input [B x " + std::to_string(cfg_.in_channels) + " x " +
                     std::to_string(cfg_.window_len) + "], got " + shape_str(x.shape()));
  }
  if (trace) trace->lengths = {x.dim(2)};
  auto h = relu(g, stem_bn.forward(g, stem_conv.forward(g, x), mode));
  if (trace) trace->lengths.push_back(h.dim(2));
  h = maxpool1d(g, h, 3, 2, 1);
  if (trace) trace->lengths.push_back(h.dim(2));
  for (auto& layer : layers) {
    for (auto& block : layer) h = block.forward(g, h, mode);
    if (trace) trace->lengths.push_back(h.dim(2));
  }
  return fc.forward(g, global_avg_pool1d(g, h));
}

template <typename T>
std::vector<NamedParam<T>> CsiEncoder<T>::parameters() const {
  std::vector<NamedParam<T>> out;
  stem_conv.collect("stem.conv", ParamRole::kBackbone, out);
  stem_bn.collect("stem.bn", ParamRole::kBackbone, out);
  for (std::size_t li = 0; li < layers.size(); ++li)
    for (std::size_t bi = 0; bi < layers[li].size(); ++bi)
      layers[li][bi].collect("layer" + std::to_string(li + 1) + "." + std::to_string(bi), out);
  fc.collect("fc", ParamRole::kBackbone, out);
  return out;
}

template <typename T>
std::vector<NamedParam<T>> CsiEncoder<T>::buffers() const {
  std::vector<NamedParam<T>> out;
  stem_bn.collect_buffers("stem.bn", out);
  for (std::size_t li = 0; li < layers.size(); ++li)
    for (std::size_t bi = 0; bi < layers[li].size(); ++bi)
      layers[li][bi].collect_buffers("layer" + std::to_string(li + 1) + "." + std::to_string(bi), out);
  return out;
}

template <typename T>
std::vector<std::pair<std::string, BatchNorm1dLayer<T>*>> CsiEncoder<T>::batchnorms() {
  std::vector<std::pair<std::string, BatchNorm1dLayer<T>*>> out{{"stem.bn", &stem_bn}};
  for (std::size_t li = 0; li < layers.size(); ++li)
    for (std::size_t bi = 0; bi < layers[li].size(); ++bi) {
      auto bns = layers[li][bi].batchnorms("layer" + std::to_string(li + 1) + "." + std::to_string(bi));
      out.insert(out.end(), bns.begin(), bns.end());
    }
  return out;
}

template <typename T>
CsiEncoder<T> CsiEncoder<T>::clone() const {
  CsiEncoder<T> out(cfg_, 0);
  auto copy = [](const std::vector<NamedParam<T>>& from, std::vector<NamedParam<T>> to) {
    for (std::size_t i = 0; i < from.size(); ++i) {
      const auto src = from[i].tensor.data();
      std::copy(src.begin(), src.end(), to[i].tensor.data().begin());
    }
  };
  copy(parameters(), out.parameters());
  copy(buffers(), out.buffers());
  return out;
}

template <typename T>
std::string CsiEncoder<T>::final_block_prefix() const {
  return "layer" + std::to_string(layers.size()) + "." + std::to_string(layers.back().size() - 1);
}

// ------------------------------------------------------------------- heads

template <typename T>
ClassificationHead<T>::ClassificationHead(std::size_t embedding_dim, std::size_t num_classes,
                                          std::uint64_t seed)
    : fc(embedding_dim, num_classes) {
  Rng rng(seed);
  fc.init(rng);
}

template <typename T>
std::vector<NamedParam<T>> ClassificationHead<T>::parameters() const {
  std::vector<NamedParam<T>> out;
  fc.collect("fc", ParamRole::kHead, out);
  return out;
}

template <typename T>
ProjectionHead<T>::ProjectionHead(std::size_t embedding_dim, std::size_t hidden, std::size_t out,
                                  std::uint64_t seed)
    : fc1(embedding_dim, hidden), fc2(hidden, out) {
  Rng rng(seed);
  fc1.init(rng);
  fc2.init(rng);
}

template <typename T>
Tensor<T> ProjectionHead<T>::forward(Graph<T>& g, const Tensor<T>& e) const {
  return fc2.forward(g, relu(g, fc1.forward(g, e)));
}

template <typename T>
std::vector<NamedParam<T>> ProjectionHead<T>::parameters() const {
  std::vector<NamedParam<T>> out;
  fc1.collect("fc1", ParamRole::kProjection, out);
  fc2.collect("fc2", ParamRole::kProjection, out);
  return out;
}

template <typename T>
DomainDiscriminator<T>::DomainDiscriminator(std::size_t embedding_dim, std::size_t hidden,
                                            std::uint64_t seed)
    : fc1(embedding_dim, hidden), fc2(hidden, 1) {
  Rng rng(seed);
  fc1.init(rng);
  fc2.init(rng);
}

template <typename T>
Tensor<T> DomainDiscriminator<T>::forward(Graph<T>& g, const Tensor<T>& e) const {
  return fc2.forward(g, relu(g, fc1.forward(g, e)));
}

template <typename T>
std::vector<NamedParam<T>> DomainDiscriminator<T>::parameters() const {
  std::vector<NamedParam<T>> out;
  fc1.collect("fc1", ParamRole::kDiscriminator, out);
  fc2.collect("fc2", ParamRole::kDiscriminator, out);
  return out;
}

template <typename T>
std::vector<NamedParam<T>> EventClassifier<T>::parameters() const {
  auto out = encoder.parameters();
  for (auto& p : head.parameters()) out.push_back({"head." + p.path, p.tensor, p.role});
  return out;
}

// -------------------------------------------------------------- trainability

std::string_view to_string(TrainMode mode) {
  switch (mode) {
    case TrainMode::kFull: return "full";
    case TrainMode::kAdaptersAndHead: return "adapters_and_head";
    case TrainMode::kHeadOnly: return "head_only";
    case TrainMode::kFinalBlockAndHead: return "final_block_and_head";
  }
  throw std::invalid_argument("unknown train mode");
}

TrainMode parse_train_mode(std::string_view name) {
  for (auto m : {TrainMode::kFull, TrainMode::kAdaptersAndHead, TrainMode::kHeadOnly,
                 TrainMode::kFinalBlockAndHead}) {
    if (to_string(m) == name) return m;
  }
  throw std::invalid_argument("unknown train mode '" + std::string(name) + "'");
}

bool TrainableMask::is_trainable(const std::string& path) const {
  const auto it = trainable.find(path);
  return it != trainable.end() && it->second;
}

template <typename T>
TrainableMask set_trainable(EventClassifier<T>& model, TrainMode mode) {
  TrainableMask mask;
  mask.mode = mode;
  const std::string final_block = model.encoder.final_block_prefix() + ".";
  for (auto& p : model.parameters()) {
    bool on = false;
    switch (mode) {
      case TrainMode::kFull: on = true; break;
      case TrainMode::kAdaptersAndHead:
        on = p.role == ParamRole::kAdapter || p.role == ParamRole::kHead;
        break;
      case TrainMode::kHeadOnly: on = p.role == ParamRole::kHead; break;
      case TrainMode::kFinalBlockAndHead:
        on = p.role == ParamRole::kHead || p.path.starts_with(final_block);
        break;
    }
    mask.trainable[p.path] = on;
    p.tensor.set_requires_grad(on);
  }
  for (auto& [prefix, bn] : model.encoder.batchnorms()) {
    bn->frozen = !mask.is_trainable(prefix + ".gamma");
  }
  return mask;
}

template <typename T>
ParamCounts count_params(const std::vector<NamedParam<T>>& params, const TrainableMask* mask) {
  ParamCounts counts;
  for (const auto& p : params) {
    const auto cut = p.path.rfind('.');
    const std::string group = cut == std::string::npos ? p.path : p.path.substr(0, cut);
    counts.by_group[group] += p.tensor.numel();
    counts.total += p.tensor.numel();
    if (!mask || mask->is_trainable(p.path)) counts.trainable += p.tensor.numel();
  }
  return counts;
}

// ---------------------------------------------------------------- describe

std::vector<LayerRow> describe_encoder(const EncoderConfig& cfg) {
  const CsiEncoder<float> enc(cfg, 0);
  const auto counts = count_params(enc.parameters());
  auto group = [&](const std::string& g) {
    const auto it = counts.by_group.find(g);
    return it == counts.by_group.end() ? std::size_t{0} : it->second;
  };

  std::vector<LayerRow> rows;
  std::size_t len = cfg.window_len;
  rows.push_back({"Input", dim_str(cfg.in_channels, len), 0, "", 0});
  rows.push_back({"Initial Convolutional Block", "", group("stem.conv") + group("stem.bn"), "", 0});
  const std::size_t stem = cfg.layer_channels.front();
  len = window_out_len(len, 7, 2, 3);
  rows.push_back({"conv1 (Conv1D)", dim_str(stem, len), group("stem.conv"), "k=7, s=2, p=3"});
  rows.push_back({"bn1 (BatchNorm1d)", dim_str(stem, len), group("stem.bn"), ""});
  rows.push_back({"relu (ReLU)", dim_str(stem, len), 0, ""});
  len = window_out_len(len, 3, 2, 1);
  rows.push_back({"pool1 (MaxPool1d)", dim_str(stem, len), 0, "k=3, s=2, p=1"});

  for (std::size_t li = 0; li < enc.layers.size(); ++li) {
    for (std::size_t bi = 0; bi < enc.layers[li].size(); ++bi) {
      const auto& block = enc.layers[li][bi];
      const std::string prefix = "layer" + std::to_string(li + 1) + "." + std::to_string(bi);
      const std::size_t ch = cfg.layer_channels[li];
      const std::size_t stride = block.conv1.stride;
      len = window_out_len(len, 3, stride, 1);
      const std::string d = dim_str(ch, len);
      std::size_t block_total = 0;
      for (const auto& [g, n] : counts.by_group)
        if (g.starts_with(prefix + ".")) block_total += n;
      rows.push_back({"Residual Block " + std::to_string(li + 1) + "." + std::to_string(bi + 1), d,
                      block_total, "", 0});
      rows.push_back({"conv1", d, group(prefix + ".conv1"),
                      "k=3, s=" + std::to_string(stride) + ", p=1"});
      rows.push_back({"bn1", d, group(prefix + ".bn1"), ""});
      rows.push_back({"relu1", d, 0, ""});
      rows.push_back({"conv2", d, group(prefix + ".conv2"), "k=3, s=1, p=1"});
      rows.push_back({"bn2", d, group(prefix + ".bn2"), ""});
      if (block.se) {
        rows.push_back({"Squeeze-and-Excitation", d, group(prefix + ".se"),
                        "reduction=" + std::to_string(cfg.se_reduction)});
      }
      if (block.adapter) {
        rows.push_back({"adapter", d, group(prefix + ".adapter.down") + group(prefix + ".adapter.up"),
                        "bottleneck=" + std::to_string(cfg.adapter_bottleneck)});
      }
      if (block.has_shortcut()) {
        rows.push_back({"shortcut conv (1x1)", d, group(prefix + ".shortcut.conv"),
                        "k=1, s=" + std::to_string(stride)});
        rows.push_back({"shortcut bn", d, group(prefix + ".shortcut.bn"), ""});
      }
      rows.push_back({"add_shortcut", d, 0, ""});
      rows.push_back({"relu2", d, 0, ""});
    }
  }
  const std::size_t last = cfg.layer_channels.back();
  rows.push_back({"Output Head", "", group("fc"), "", 0});
  rows.push_back({"Global Avg Pooling", dim_str(last, 1), 0, ""});
  rows.push_back({"Squeeze", std::to_string(last), 0, ""});
  rows.push_back({"Fully Connected", std::to_string(cfg.embedding_dim), group("fc"),
                  "in=" + std::to_string(last) + ", out=" + std::to_string(cfg.embedding_dim)});
  rows.push_back({"Total Parameters", "", counts.total, "", 0});
  return rows;
}

std::string format_layer_table(const std::vector<LayerRow>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(34) << "Layer" << std::setw(14) << "Output Dim." << std::right
     << std::setw(12) << "Params #" << "  " << "Details" << '\n';
  os << std::string(76, '-') << '\n';
  for (const auto& r : rows) {
    const std::string name = (r.depth > 0 ? "  - " : "") + r.name;
    os << std::left << std::setw(34) << name << std::setw(14) << r.output_dim << std::right
       << std::setw(12) << with_commas(r.params) << "  " << r.details << '\n';
  }
  return os.str();
}

// ------------------------------------------------------------------ batching

template <typename T>
Tensor<T> make_batch(std::span<const Window* const> windows) {
  if (windows.empty()) throw std::invalid_argument("cannot batch zero windows");
  const std::size_t W = windows.front()->length, C = windows.front()->channels;
  Tensor<T> out(Shape{windows.size(), C, W});
  auto dst = out.data();
  for (std::size_t b = 0; b < windows.size(); ++b) {
    const Window& w = *windows[b];
    if (w.length != W || w.channels != C) throw ShapeError("windows in a batch must share one shape");
    for (std::size_t t = 0; t < W; ++t)
      for (std::size_t c = 0; c < C; ++c) dst[(b * C + c) * W + t] = static_cast<T>(w.values[t * C + c]);
  }
  return out;
}

template <typename T>
Tensor<T> make_batch(const std::vector<Window>& windows) {
  std::vector<const Window*> ptrs;
  ptrs.reserve(windows.size());
  for (const auto& w : windows) ptrs.push_back(&w);
  return make_batch<T>(std::span<const Window* const>(ptrs));
}

#define CSISENSE_INSTANTIATE(T)                                                              \
  template class Conv1dLayer<T>;                                                             \
  template class BatchNorm1dLayer<T>;                                                        \
  template class LinearLayer<T>;                                                             \
  template class SEBlock<T>;                                                                 \
  template class Adapter<T>;                                                                 \
  template class ResidualBlock<T>;                                                           \
  template class CsiEncoder<T>;                                                              \
  template class ClassificationHead<T>;                                                      \
  template class ProjectionHead<T>;                                                          \
  template class DomainDiscriminator<T>;                                                     \
  template struct EventClassifier<T>;                                                        \
  template TrainableMask set_trainable(EventClassifier<T>&, TrainMode);                      \
  template ParamCounts count_params(const std::vector<NamedParam<T>>&, const TrainableMask*); \
  template Tensor<T> make_batch<T>(std::span<const Window* const>);                          \
  template Tensor<T> make_batch<T>(const std::vector<Window>&);

CSISENSE_INSTANTIATE(float)
CSISENSE_INSTANTIATE(double)
#undef CSISENSE_INSTANTIATE

}  // namespace csisense
