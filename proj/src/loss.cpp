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

#include "csisense/loss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace csisense {

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

namespace {

double stable_sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

template <typename T>
void check_labels(const Tensor<T>& logits, std::span<const int> labels, const char* op) {
  if (logits.rank() != 2) throw ShapeError(std::string(op) + ": logits must be [B, K], got " + shape_str(logits.shape()));
  if (logits.dim(0) == 0) throw std::invalid_argument(std::string(op) + ": empty batch");
  if (labels.size() != logits.dim(0)) {
    throw ShapeError(std::string(op) + ": " + std::to_string(labels.size()) + " labels for " +
                     std::to_string(logits.dim(0)) + " rows");
  }
  for (const int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= logits.dim(1)) {
      throw std::out_of_range(std::string(op) + ": label " + std::to_string(y) + " outside [0, " +
                              std::to_string(logits.dim(1)) + ")");
    }
  }
}

// Row-wise log-softmax in double.
template <typename T>
std::vector<double> log_softmax_rows(const Tensor<T>& logits) {
  const std::size_t B = logits.dim(0), K = logits.dim(1);
  const auto z = logits.data();
  std::vector<double> out(B * K);
  for (std::size_t b = 0; b < B; ++b) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < K; ++k) mx = std::max(mx, static_cast<double>(z[b * K + k]));
    double s = 0;
    for (std::size_t k = 0; k < K; ++k) s += std::exp(static_cast<double>(z[b * K + k]) - mx);
    const double lse = mx + std::log(s);
    for (std::size_t k = 0; k < K; ++k) out[b * K + k] = static_cast<double>(z[b * K + k]) - lse;
  }
  return out;
}

template <typename T>
Tensor<T> make_scalar(Graph<T>& g, double value, std::initializer_list<const Tensor<T>*> inputs, bool& tracked) {
  tracked = g.tracks(inputs);
  return Tensor<T>(Shape{1}, std::vector<T>{static_cast<T>(value)}, tracked);
}

}  // namespace

template <typename T>
Tensor<T> nt_xent(Graph<T>& g, const Tensor<T>& projections, double temperature) {
  if (!(temperature > 0)) throw std::invalid_argument("nt_xent: temperature must be > 0");
  if (projections.rank() != 2 || projections.dim(0) < 2 || projections.dim(0) % 2 != 0) {
    throw ShapeError("nt_xent: projections must be [2N, P] with N >= 1, got " + shape_str(projections.shape()));
  }
  const std::size_t M = projections.dim(0), P = projections.dim(1);
  const auto zs = projections.data();

  std::vector<double> norms(M), u(M * P);
  for (std::size_t i = 0; i < M; ++i) {
    double s = 0;
    for (std::size_t p = 0; p < P; ++p) s += static_cast<double>(zs[i * P + p]) * zs[i * P + p];
    norms[i] = std::sqrt(s);
    if (!(norms[i] > 0)) throw std::invalid_argument("nt_xent: projection row " + std::to_string(i) + " has zero norm");
    for (std::size_t p = 0; p < P; ++p) u[i * P + p] = zs[i * P + p] / norms[i];
  }

  // sim[i][k] = cos(z_i, z_k) / tau; prob[i][k] = softmax over k != i
  std::vector<double> sim(M * M), prob(M * M, 0.0);
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t k = 0; k < M; ++k) {
      double d = 0;
      for (std::size_t p = 0; p < P; ++p) d += u[i * P + p] * u[k * P + p];
      sim[i * M + k] = d / temperature;
    }

  double total = 0;
  for (std::size_t i = 0; i < M; ++i) {
    const std::size_t j = i ^ 1;
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < M; ++k)
      if (k != i) mx = std::max(mx, sim[i * M + k]);
    double s = 0;
    for (std::size_t k = 0; k < M; ++k)
      if (k != i) s += std::exp(sim[i * M + k] - mx);
    for (std::size_t k = 0; k < M; ++k)
      if (k != i) prob[i * M + k] = std::exp(sim[i * M + k] - mx) / s;
    total += (mx - sim[i * M + j]) + std::log(s);
  }

  bool tracked = false;
  auto out = make_scalar(g, total / static_cast<double>(M), {&projections}, tracked);
  if (tracked) {
    g.record([projections, out, M, P, temperature, u = std::move(u), norms = std::move(norms),
              prob = std::move(prob)]() {
      const double up = out.grad()[0];
      // a[i][k] = dL/dsim[i][k]
      std::vector<double> a(M * M, 0.0);
      for (std::size_t i = 0; i < M; ++i)
        for (std::size_t k = 0; k < M; ++k)
          if (k != i) a[i * M + k] = (prob[i * M + k] - (k == (i ^ 1) ? 1.0 : 0.0)) / static_cast<double>(M);
      auto dz = projections.grad();
      std::vector<double> gu(P);
      for (std::size_t i = 0; i < M; ++i) {
        std::fill(gu.begin(), gu.end(), 0.0);
        for (std::size_t k = 0; k < M; ++k) {
          const double w = (a[i * M + k] + a[k * M + i]) / temperature;
          if (w == 0) continue;
          for (std::size_t p = 0; p < P; ++p) gu[p] += w * u[k * P + p];
        }
        double dot = 0;
        for (std::size_t p = 0; p < P; ++p) dot += gu[p] * u[i * P + p];
        for (std::size_t p = 0; p < P; ++p) {
          dz[i * P + p] += static_cast<T>(up * (gu[p] - u[i * P + p] * dot) / norms[i]);
        }
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> cross_entropy(Graph<T>& g, const Tensor<T>& logits, std::span<const int> labels) {
  return focal_loss(g, logits, labels, 0.0);
}

template <typename T>
Tensor<T> focal_loss(Graph<T>& g, const Tensor<T>& logits, std::span<const int> labels, double gamma) {
  if (!(gamma >= 0)) throw std::invalid_argument("focal_loss: gamma must be >= 0");
  check_labels(logits, labels, gamma == 0 ? "cross_entropy" : "focal_loss");
  const std::size_t B = logits.dim(0), K = logits.dim(1);
  const auto logp = log_softmax_rows(logits);
  // per-row factor c_b so that dL_b/dz_k = (onehot_k - p_k) * c_b
  std::vector<double> coeff(B);
  double total = 0;
  for (std::size_t b = 0; b < B; ++b) {
    const double lpt = logp[b * K + static_cast<std::size_t>(labels[b])];
    const double pt = std::exp(lpt);
    const double q = -std::expm1(lpt);  // 1 - p_t without cancellation
    const double w = gamma == 0 ? 1.0 : std::pow(q, gamma);
    total += -w * lpt;
    double c = -w;
    if (gamma != 0 && q > 0) c += gamma * std::pow(q, gamma - 1.0) * pt * lpt;
    coeff[b] = c;
  }
  bool tracked = false;
  auto out = make_scalar(g, total / static_cast<double>(B), {&logits}, tracked);
  if (tracked) {
    std::vector<int> ys(labels.begin(), labels.end());
    g.record([logits, out, B, K, logp, coeff = std::move(coeff), ys = std::move(ys)]() {
      const double up = out.grad()[0] / static_cast<double>(B);
      auto dz = logits.grad();
      for (std::size_t b = 0; b < B; ++b)
        for (std::size_t k = 0; k < K; ++k) {
          const double onehot = static_cast<int>(k) == ys[b] ? 1.0 : 0.0;
          dz[b * K + k] += static_cast<T>(up * (onehot - std::exp(logp[b * K + k])) * coeff[b]);
        }
    });
  }
  return out;
}

template <typename T>
Tensor<T> adda_discriminator_loss(Graph<T>& g, const Tensor<T>& src_logits, const Tensor<T>& tgt_logits) {
  if (src_logits.numel() == 0 || tgt_logits.numel() == 0) {
    throw std::invalid_argument("adda_discriminator_loss: empty logits");
  }
  const auto s = src_logits.data();
  const auto t = tgt_logits.data();
  double ls = 0, lt = 0;
  for (const T v : s) ls += softplus(-static_cast<double>(v));
  for (const T v : t) lt += softplus(static_cast<double>(v));
  const double ns = static_cast<double>(s.size()), nt = static_cast<double>(t.size());
  bool tracked = false;
  auto out = make_scalar(g, ls / ns + lt / nt, {&src_logits, &tgt_logits}, tracked);
  if (tracked) {
    g.record([src_logits, tgt_logits, out, ns, nt]() {
      const double up = out.grad()[0];
      if (src_logits.requires_grad()) {
        const auto v = src_logits.data();
        auto d = src_logits.grad();
        for (std::size_t i = 0; i < v.size(); ++i) d[i] += static_cast<T>(-up * stable_sigmoid(-static_cast<double>(v[i])) / ns);
      }
      if (tgt_logits.requires_grad()) {
        const auto v = tgt_logits.data();
        auto d = tgt_logits.grad();
        for (std::size_t i = 0; i < v.size(); ++i) d[i] += static_cast<T>(up * stable_sigmoid(static_cast<double>(v[i])) / nt);
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> adda_generator_loss(Graph<T>& g, const Tensor<T>& tgt_logits) {
  if (tgt_logits.numel() == 0) throw std::invalid_argument("adda_generator_loss: empty logits");
  const auto t = tgt_logits.data();
  double lt = 0;
  for (const T v : t) lt += softplus(-static_cast<double>(v));
  const double nt = static_cast<double>(t.size());
  bool tracked = false;
  auto out = make_scalar(g, lt / nt, {&tgt_logits}, tracked);
  if (tracked) {
    g.record([tgt_logits, out, nt]() {
      const double up = out.grad()[0];
      const auto v = tgt_logits.data();
      auto d = tgt_logits.grad();
      for (std::size_t i = 0; i < v.size(); ++i) d[i] += static_cast<T>(-up * stable_sigmoid(-static_cast<double>(v[i])) / nt);
    });
  }
  return out;
}

#define CSISENSE_INSTANTIATE(T)                                                                   \
  template Tensor<T> nt_xent(Graph<T>&, const Tensor<T>&, double);                                \
  template Tensor<T> cross_entropy(Graph<T>&, const Tensor<T>&, std::span<const int>);            \
  template Tensor<T> focal_loss(Graph<T>&, const Tensor<T>&, std::span<const int>, double);       \
  template Tensor<T> adda_discriminator_loss(Graph<T>&, const Tensor<T>&, const Tensor<T>&);      \
  template Tensor<T> adda_generator_loss(Graph<T>&, const Tensor<T>&);

CSISENSE_INSTANTIATE(float)
CSISENSE_INSTANTIATE(double)
#undef CSISENSE_INSTANTIATE

}  // namespace csisense
