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

#include "csisense/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "csisense/csv_io.hpp"
#include "csisense/loss.hpp"
#include "csisense/optim.hpp"

namespace csisense {

namespace {

std::vector<std::size_t> shuffled_order(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

std::vector<int> argmax_rows(const Tensor<float>& logits) {
  const std::size_t B = logits.dim(0), K = logits.dim(1);
  const auto v = logits.data();
  std::vector<int> out(B);
  for (std::size_t b = 0; b < B; ++b) {
    const auto* row = v.data() + b * K;
    out[b] = static_cast<int>(std::max_element(row, row + K) - row);
  }
  return out;
}

Tensor<float> gather_rows(const Tensor<float>& x, std::span<const std::size_t> rows) {
  const std::size_t D = x.dim(1);
  Tensor<float> out(Shape{rows.size(), D});
  const auto src = x.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < rows.size(); ++i)
    std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(rows[i] * D), D, dst.begin() + static_cast<std::ptrdiff_t>(i * D));
  return out;
}

void check_labels(const std::vector<LabeledWindow>& labeled, std::size_t num_classes) {
  if (labeled.empty()) throw std::invalid_argument("no labeled windows to train on");
  for (const auto& lw : labeled) {
    if (lw.label < 0 || static_cast<std::size_t>(lw.label) >= num_classes) {
      throw std::out_of_range("label " + std::to_string(lw.label) + " is outside the " +
                              std::to_string(num_classes) + "-class head");
    }
  }
}

Tensor<float> supervised_loss(Graph<float>& g, const Tensor<float>& logits, std::span<const int> labels,
                              LossKind kind, double gamma) {
  return kind == LossKind::kFocal ? focal_loss(g, logits, labels, gamma) : cross_entropy(g, logits, labels);
}

std::vector<NamedParam<float>> with_prefix(std::vector<NamedParam<float>> params, const std::string& prefix) {
  for (auto& p : params) p.path = prefix + p.path;
  return params;
}

}  // namespace

std::string log_to_csv(const std::vector<EpochLog>& log) {
  const bool acc = !log.empty() && log.front().accuracy.has_value();
  const bool disc = !log.empty() && log.front().discriminator_loss.has_value();
  std::string out = "epoch,loss";
  if (acc) out += ",accuracy";
  if (disc) out += ",discriminator_loss";
  out += '\n';
  for (const auto& e : log) {
    out += std::to_string(e.epoch) + "," + format_real(e.loss);
    if (acc) out += "," + format_real(e.accuracy.value_or(0.0));
    if (disc) out += "," + format_real(e.discriminator_loss.value_or(0.0));
    out += '\n';
  }
  return out;
}

// ------------------------------------------------------------ pre-training

std::vector<EpochLog> pretrain_contrastive(CsiEncoder<float>& encoder, ProjectionHead<float>& projection,
                                           const std::vector<Window>& windows, const PretrainConfig& cfg,
                                           const AugmentPolicy& policy) {
  if (cfg.batch_size < 2) throw std::invalid_argument("contrastive batches need at least 2 windows");
  if (windows.size() < cfg.batch_size) {
    throw std::invalid_argument("pre-training needs at least batch_size (" + std::to_string(cfg.batch_size) +
                                ") windows, got " + std::to_string(windows.size()));
  }
  policy.validate(encoder.config().window_len);

  std::vector<NamedParam<float>> trainable;
  for (auto& p : encoder.parameters()) {
    const bool on = p.role != ParamRole::kAdapter;
    p.tensor.set_requires_grad(on);
    if (on) trainable.push_back(p);
  }
  for (auto& [path, bn] : encoder.batchnorms()) bn->frozen = false;
  for (auto& p : projection.parameters()) {
    p.tensor.set_requires_grad(true);
    trainable.push_back(p);
  }
  Adam<float> opt({ParamGroup<float>{"pretrain", cfg.lr, trainable}});

  std::vector<EpochLog> log;
  const std::size_t n = windows.size();
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto order = shuffled_order(n, derive_seed(cfg.seed, static_cast<std::uint64_t>(epoch)));
    const std::uint64_t view_seed = derive_seed(policy.seed, static_cast<std::uint64_t>(epoch));
    double total = 0;
    int batches = 0;
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t B = std::min(cfg.batch_size, n - start);
      if (B < 2) continue;
      std::vector<Window> views(2 * B);
#pragma omp parallel for schedule(static)
      for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(B); ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        Rng rng(derive_seed(view_seed, start + i));
        auto [a, b] = make_view_pair(windows[order[start + i]], policy, rng);
        views[2 * i] = std::move(a);
        views[2 * i + 1] = std::move(b);
      }
      const auto x = make_batch<float>(views);
      Graph<float> g;
      const auto z = projection.forward(g, encoder.forward(g, x, Mode::kTrain));
      const auto loss = nt_xent(g, z, cfg.temperature);
      g.backward(loss);
      opt.step();
      opt.zero_grad();
      total += loss.item();
      ++batches;
    }
    log.push_back({epoch + 1, batches ? total / batches : 0.0, std::nullopt, std::nullopt});
  }
  // Running statistics so far tracked augmented views under moving weights.
  recalibrate_batchnorm(encoder, windows);
  return log;
}

// -------------------------------------------------------------- fine-tuning

std::string_view to_string(LossKind kind) { return kind == LossKind::kFocal ? "focal" : "cross_entropy"; }

LossKind parse_loss_kind(std::string_view name) {
  if (name == "cross_entropy") return LossKind::kCrossEntropy;
  if (name == "focal") return LossKind::kFocal;
  throw std::invalid_argument("unknown loss '" + std::string(name) + "'");
}

FinetuneConfig FinetuneConfig::preset(std::string_view name) {
  FinetuneConfig c;
  if (name == "wiflow") return c;
  if (name == "wiar") {
    c.epochs = 75;
    c.batch_size = 32;
    c.loss = LossKind::kFocal;
    return c;
  }
  throw std::invalid_argument("unknown fine-tuning preset '" + std::string(name) + "'");
}

AdaptResult finetune_classifier(EventClassifier<float>& model, const std::vector<LabeledWindow>& labeled,
                                const FinetuneConfig& cfg) {
  if (cfg.batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  check_labels(labeled, model.head.num_classes());
  AdaptResult result;
  result.mask = set_trainable(model, cfg.mode);
  const auto params = model.parameters();
  result.counts = count_params(params, &result.mask);

  ParamGroup<float> enc{"encoder", cfg.encoder_lr, {}}, head{"head", cfg.head_lr, {}};
  for (const auto& p : params) (p.role == ParamRole::kHead ? head : enc).params.push_back(p);
  Adam<float> opt({enc, head}, {}, &result.mask);

  const std::size_t n = labeled.size();
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto order = shuffled_order(n, derive_seed(cfg.seed, static_cast<std::uint64_t>(epoch)));
    double total = 0;
    std::size_t correct = 0;
    int batches = 0;
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t B = std::min(cfg.batch_size, n - start);
      std::vector<const Window*> xs(B);
      std::vector<int> ys(B);
      for (std::size_t i = 0; i < B; ++i) {
        xs[i] = &labeled[order[start + i]].window;
        ys[i] = labeled[order[start + i]].label;
      }
      Graph<float> g;
      const auto logits = model.forward(g, make_batch<float>(std::span<const Window* const>(xs)), Mode::kTrain);
      const auto loss = supervised_loss(g, logits, ys, cfg.loss, cfg.focal_gamma);
      g.backward(loss);
      opt.step();
      opt.zero_grad();
      const auto pred = argmax_rows(logits);
      for (std::size_t i = 0; i < B; ++i) correct += pred[i] == ys[i];
      total += loss.item();
      ++batches;
    }
    result.log.push_back({epoch + 1, total / batches, static_cast<double>(correct) / static_cast<double>(n), std::nullopt});
  }
  return result;
}

AdaptResult linear_probe(EventClassifier<float>& model, const std::vector<LabeledWindow>& labeled,
                         const ProbeConfig& cfg) {
  if (cfg.batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  check_labels(labeled, model.head.num_classes());
  AdaptResult result;
  result.mask = set_trainable(model, TrainMode::kHeadOnly);
  result.counts = count_params(model.parameters(), &result.mask);

  std::vector<Window> windows;
  windows.reserve(labeled.size());
  for (const auto& lw : labeled) windows.push_back(lw.window);
  const auto features = embed_windows(model.encoder, windows);

  Adam<float> opt({ParamGroup<float>{"head", cfg.lr, with_prefix(model.head.parameters(), "head.")}}, {}, &result.mask);
  const std::size_t n = labeled.size();
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto order = shuffled_order(n, derive_seed(cfg.seed, static_cast<std::uint64_t>(epoch)));
    double total = 0;
    std::size_t correct = 0;
    int batches = 0;
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t B = std::min(cfg.batch_size, n - start);
      const std::span<const std::size_t> rows(order.data() + start, B);
      std::vector<int> ys(B);
      for (std::size_t i = 0; i < B; ++i) ys[i] = labeled[rows[i]].label;
      Graph<float> g;
      const auto logits = model.head.forward(g, gather_rows(features, rows));
      const auto loss = cross_entropy(g, logits, ys);
      g.backward(loss);
      opt.step();
      opt.zero_grad();
      const auto pred = argmax_rows(logits);
      for (std::size_t i = 0; i < B; ++i) correct += pred[i] == ys[i];
      total += loss.item();
      ++batches;
    }
    result.log.push_back({epoch + 1, total / batches, static_cast<double>(correct) / static_cast<double>(n), std::nullopt});
  }
  return result;
}

// ------------------------------------------------------------------- ADDA

void recalibrate_batchnorm(CsiEncoder<float>& encoder, const std::vector<Window>& windows, std::size_t batch_size) {
  if (windows.empty()) throw std::invalid_argument("batch-norm recalibration needs windows");
  if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  auto bns = encoder.batchnorms();
  std::vector<double> saved;
  std::vector<std::vector<double>> sum_mean, sum_sq;
  for (auto& [path, bn] : bns) {
    saved.push_back(bn->stats.momentum);
    bn->stats.momentum = 1.0;  // running stats become the batch stats
    bn->frozen = false;
    sum_mean.emplace_back(bn->stats.mean.numel(), 0.0);
    sum_sq.emplace_back(bn->stats.mean.numel(), 0.0);
  }
  // Pooled mean and second moment, weighted by windows per batch, so the
  // result does not depend on how the windows were batched.
  for (std::size_t start = 0; start < windows.size(); start += batch_size) {
    const std::size_t B = std::min(batch_size, windows.size() - start);
    std::vector<const Window*> xs(B);
    for (std::size_t i = 0; i < B; ++i) xs[i] = &windows[start + i];
    Graph<float> g(false);
    encoder.forward(g, make_batch<float>(std::span<const Window* const>(xs)), Mode::kTrain);
    for (std::size_t l = 0; l < bns.size(); ++l) {
      const auto m = bns[l].second->stats.mean.data();
      const auto v = bns[l].second->stats.var.data();
      for (std::size_t c = 0; c < m.size(); ++c) {
        sum_mean[l][c] += static_cast<double>(B) * m[c];
        sum_sq[l][c] += static_cast<double>(B) * (static_cast<double>(v[c]) + static_cast<double>(m[c]) * m[c]);
      }
    }
  }
  const double n = static_cast<double>(windows.size());
  for (std::size_t l = 0; l < bns.size(); ++l) {
    auto m = bns[l].second->stats.mean.data();
    auto v = bns[l].second->stats.var.data();
    for (std::size_t c = 0; c < m.size(); ++c) {
      const double mean = sum_mean[l][c] / n;
      m[c] = static_cast<float>(mean);
      v[c] = static_cast<float>(std::max(sum_sq[l][c] / n - mean * mean, 0.0));
    }
    bns[l].second->stats.momentum = saved[l];
  }
}

AddaResult adda_adapt(const CsiEncoder<float>& source, const std::vector<Window>& source_windows,
                      const std::vector<Window>& target_windows, const AddaConfig& cfg) {
  if (target_windows.empty()) throw std::invalid_argument("adversarial adaptation needs target windows");
  if (source_windows.empty()) throw std::invalid_argument("adversarial adaptation needs source windows");
  if (cfg.batch_size < 1) throw std::invalid_argument("batch size must be >= 1");

  CsiEncoder<float> frozen = source.clone();
  for (auto& p : frozen.parameters()) p.tensor.set_requires_grad(false);

  AddaResult r{source.clone(),
               DomainDiscriminator<float>(source.config().embedding_dim, cfg.discriminator_hidden,
                                          derive_seed(cfg.seed, 0xD15C)),
               {}};
  auto target_params = r.target.parameters();
  for (auto& p : target_params) p.tensor.set_requires_grad(true);
  auto disc_params = r.discriminator.parameters();
  for (auto& p : disc_params) p.tensor.set_requires_grad(true);
  Adam<float> enc_opt({ParamGroup<float>{"target", cfg.encoder_lr, target_params}});
  Adam<float> disc_opt({ParamGroup<float>{"discriminator", cfg.discriminator_lr, disc_params}});

  const std::size_t nt = target_windows.size(), ns = source_windows.size();
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto e = static_cast<std::uint64_t>(epoch);
    const auto t_order = shuffled_order(nt, derive_seed(cfg.seed, 2 * e));
    const auto s_order = shuffled_order(ns, derive_seed(cfg.seed, 2 * e + 1));
    double gen_total = 0, disc_total = 0;
    int batches = 0;
    for (std::size_t start = 0; start < nt; start += cfg.batch_size) {
      const std::size_t B = std::min(cfg.batch_size, nt - start);
      std::vector<const Window*> xt(B), xs(B);
      for (std::size_t i = 0; i < B; ++i) {
        xt[i] = &target_windows[t_order[start + i]];
        xs[i] = &source_windows[s_order[(start + i) % ns]];
      }
      Graph<float> gs(false);
      const auto src_emb = frozen.forward(gs, make_batch<float>(std::span<const Window* const>(xs)), Mode::kEval);
      Graph<float> g;
      const auto tgt_emb = r.target.forward(g, make_batch<float>(std::span<const Window* const>(xt)), Mode::kTrain);

      // discriminator step on detached target embeddings
      {
        const Tensor<float> detached(tgt_emb.shape(), tgt_emb.to_vector());
        Graph<float> gd;
        const auto loss = adda_discriminator_loss(gd, r.discriminator.forward(gd, src_emb),
                                                  r.discriminator.forward(gd, detached));
        gd.backward(loss);
        disc_opt.step();
        disc_opt.zero_grad();
        disc_total += loss.item();
      }
      // target-encoder step against the updated discriminator
      const auto gen = adda_generator_loss(g, r.discriminator.forward(g, tgt_emb));
      g.backward(gen);
      enc_opt.step();
      enc_opt.zero_grad();
      disc_opt.zero_grad();
      gen_total += gen.item();
      ++batches;
    }
    r.log.push_back({epoch + 1, gen_total / batches, std::nullopt, disc_total / batches});
  }
  for (auto& p : target_params) p.tensor.set_requires_grad(false);
  recalibrate_batchnorm(r.target, target_windows);
  return r;
}

// ------------------------------------------------------------- inference

Tensor<float> embed_windows(CsiEncoder<float>& encoder, const std::vector<Window>& windows, std::size_t batch_size) {
  const std::size_t D = encoder.config().embedding_dim;
  Tensor<float> out(Shape{windows.size(), D});
  auto dst = out.data();
  for (std::size_t start = 0; start < windows.size(); start += batch_size) {
    const std::size_t B = std::min(batch_size, windows.size() - start);
    std::vector<const Window*> xs(B);
    for (std::size_t i = 0; i < B; ++i) xs[i] = &windows[start + i];
    Graph<float> g(false);
    const auto e = encoder.forward(g, make_batch<float>(std::span<const Window* const>(xs)), Mode::kEval);
    std::copy(e.data().begin(), e.data().end(), dst.begin() + static_cast<std::ptrdiff_t>(start * D));
  }
  return out;
}

std::vector<int> predict(EventClassifier<float>& model, const std::vector<Window>& windows, std::size_t batch_size) {
  std::vector<int> out;
  out.reserve(windows.size());
  for (std::size_t start = 0; start < windows.size(); start += batch_size) {
    const std::size_t B = std::min(batch_size, windows.size() - start);
    std::vector<const Window*> xs(B);
    for (std::size_t i = 0; i < B; ++i) xs[i] = &windows[start + i];
    Graph<float> g(false);
    const auto logits = model.forward(g, make_batch<float>(std::span<const Window* const>(xs)), Mode::kEval);
    const auto pred = argmax_rows(logits);
    out.insert(out.end(), pred.begin(), pred.end());
  }
  return out;
}

double domain_probe_accuracy(const Tensor<float>& source_embeddings, const Tensor<float>& target_embeddings,
                             std::uint64_t seed, int epochs) {
  if (source_embeddings.rank() != 2 || target_embeddings.rank() != 2 ||
      source_embeddings.dim(1) != target_embeddings.dim(1)) {
    throw ShapeError("domain probe needs [N, D] embeddings of equal width");
  }
  const std::size_t D = source_embeddings.dim(1);
  struct Half {
    std::vector<std::size_t> fit, held;
  };
  auto split = [&](std::size_t n, std::uint64_t s) {
    if (n < 2) throw std::invalid_argument("domain probe needs at least two embeddings per domain");
    const auto order = shuffled_order(n, s);
    Half h;
    h.fit.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n / 2));
    h.held.assign(order.begin() + static_cast<std::ptrdiff_t>(n / 2), order.end());
    return h;
  };
  const Half hs = split(source_embeddings.dim(0), derive_seed(seed, 1));
  const Half ht = split(target_embeddings.dim(0), derive_seed(seed, 2));

  // standardize with statistics of the fitting half
  std::vector<double> mean(D, 0.0), sd(D, 0.0);
  const auto S = source_embeddings.data();
  const auto T = target_embeddings.data();
  const double n_fit = static_cast<double>(hs.fit.size() + ht.fit.size());
  for (auto i : hs.fit)
    for (std::size_t d = 0; d < D; ++d) mean[d] += S[i * D + d] / n_fit;
  for (auto i : ht.fit)
    for (std::size_t d = 0; d < D; ++d) mean[d] += T[i * D + d] / n_fit;
  for (auto i : hs.fit)
    for (std::size_t d = 0; d < D; ++d) sd[d] += (S[i * D + d] - mean[d]) * (S[i * D + d] - mean[d]) / n_fit;
  for (auto i : ht.fit)
    for (std::size_t d = 0; d < D; ++d) sd[d] += (T[i * D + d] - mean[d]) * (T[i * D + d] - mean[d]) / n_fit;
  for (auto& v : sd) v = std::sqrt(v) + 1e-8;
  auto features = [&](std::span<const float> src, const std::vector<std::size_t>& rows) {
    Tensor<double> x(Shape{rows.size(), D});
    auto dst = x.data();
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t d = 0; d < D; ++d) dst[r * D + d] = (src[rows[r] * D + d] - mean[d]) / sd[d];
    return x;
  };
  const auto xs_fit = features(S, hs.fit), xt_fit = features(T, ht.fit);
  const auto xs_held = features(S, hs.held), xt_held = features(T, ht.held);

  LinearLayer<double> probe(D, 1);
  Rng rng(derive_seed(seed, 3));
  probe.init(rng);
  std::vector<NamedParam<double>> params;
  probe.collect("probe", ParamRole::kDiscriminator, params);
  for (auto& p : params) p.tensor.set_requires_grad(true);
  Adam<double> opt({ParamGroup<double>{"probe", 1e-2, params}});
  for (int epoch = 0; epoch < epochs; ++epoch) {
    Graph<double> g;
    const auto loss = adda_discriminator_loss(g, probe.forward(g, xs_fit), probe.forward(g, xt_fit));
    g.backward(loss);
    opt.step();
    opt.zero_grad();
  }
  Graph<double> g(false);
  const auto ls_t = probe.forward(g, xs_held);
  const auto lt_t = probe.forward(g, xt_held);
  const auto ls = ls_t.data();
  const auto lt = lt_t.data();
  std::size_t correct = 0;
  for (double v : ls) correct += v >= 0;
  for (double v : lt) correct += v < 0;
  return static_cast<double>(correct) / static_cast<double>(ls.size() + lt.size());
}

// ------------------------------------------------------------------ k-shot

KShotSplit sample_kshot(const std::vector<LabeledWindow>& pool, std::size_t num_classes, std::size_t k,
                        std::uint64_t seed) {
  KShotSplit split;
  if (k == 0) {
    split.train.resize(pool.size());
    std::iota(split.train.begin(), split.train.end(), std::size_t{0});
    return split;
  }
  std::vector<std::vector<std::size_t>> by_class(num_classes);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const int y = pool[i].label;
    if (y < 0 || static_cast<std::size_t>(y) >= num_classes) throw std::out_of_range("label outside the class set");
    by_class[static_cast<std::size_t>(y)].push_back(i);
  }
  std::vector<bool> chosen(pool.size(), false);
  Rng rng(seed);
  for (std::size_t c = 0; c < num_classes; ++c) {
    auto& idx = by_class[c];
    if (idx.size() < k) {
      throw std::invalid_argument("class " + std::to_string(c) + " has " + std::to_string(idx.size()) +
                                  " examples, fewer than k = " + std::to_string(k));
    }
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t j = 0; j < k; ++j) chosen[idx[j]] = true;
  }
  for (std::size_t i = 0; i < pool.size(); ++i) (chosen[i] ? split.train : split.rest).push_back(i);
  return split;
}

KShotSummary kshot_eval(const std::function<EventClassifier<float>()>& make_model,
                        const std::vector<LabeledWindow>& pool, const std::vector<LabeledWindow>& test,
                        std::size_t num_classes, std::size_t k, int repeats, KShotMethod method,
                        const FinetuneConfig& finetune_cfg, const ProbeConfig& probe_cfg, std::uint64_t seed) {
  if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");
  KShotSummary summary;
  std::vector<double> accs, f1s;
  for (int r = 0; r < repeats; ++r) {
    const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(r));
    const auto split = sample_kshot(pool, num_classes, k, s);
    std::vector<LabeledWindow> train;
    for (auto i : split.train) train.push_back(pool[i]);
    std::vector<LabeledWindow> held;
    if (test.empty()) {
      for (auto i : split.rest) held.push_back(pool[i]);
    } else {
      held = test;
    }
    if (held.empty()) throw std::invalid_argument("k-shot evaluation has no held-out windows");

    EventClassifier<float> model = make_model();
    if (method == KShotMethod::kProbe) {
      ProbeConfig pc = probe_cfg;
      pc.seed = s;
      linear_probe(model, train, pc);
    } else {
      FinetuneConfig fc = finetune_cfg;
      fc.seed = s;
      finetune_classifier(model, train, fc);
    }
    std::vector<Window> xs;
    std::vector<int> ys;
    for (const auto& lw : held) {
      xs.push_back(lw.window);
      ys.push_back(lw.label);
    }
    const auto report = classification_metrics(predict(model, xs), ys, num_classes);
    summary.rows.push_back({r, s, report.accuracy, report.weighted_f1});
    accs.push_back(report.accuracy);
    f1s.push_back(report.weighted_f1);
  }
  summary.accuracy = mean_std(accs);
  summary.weighted_f1 = mean_std(f1s);
  return summary;
}

std::string kshot_to_csv(const KShotSummary& summary) {
  std::string out = "repeat,seed,accuracy,weighted_f1\n";
  for (const auto& r : summary.rows) {
    out += std::to_string(r.repeat) + "," + std::to_string(r.seed) + "," + format_real(r.accuracy) + "," +
           format_real(r.weighted_f1) + "\n";
  }
  out += "mean,," + format_real(summary.accuracy.mean) + "," + format_real(summary.weighted_f1.mean) + "\n";
  out += "std,," + format_real(summary.accuracy.std) + "," + format_real(summary.weighted_f1.std) + "\n";
  return out;
}

}  // namespace csisense
