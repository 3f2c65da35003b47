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

#include "csisense/ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "csisense/kernels.hpp"

namespace csisense {

namespace {

template <typename T>
void require_rank(const Tensor<T>& t, std::size_t rank, const char* op, const char* what) {
  if (!t.defined() || t.rank() != rank) {
    throw ShapeError(std::string(op) + ": " + what + " must have rank " + std::to_string(rank) +
                     (t.defined() ? ", got " + shape_str(t.shape()) : ", got undefined tensor"));
  }
}

template <typename T>
void require_same_shape(const Tensor<T>& a, const Tensor<T>& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_str(a.shape()) + " vs " +
                     shape_str(b.shape()));
  }
}

// Gradient sink for an operand: its grad buffer when tracked, else scratch.
template <typename T>
std::span<T> grad_or_scratch(const Tensor<T>& t, std::vector<T>& scratch) {
  if (t.requires_grad()) return t.grad();
  scratch.assign(t.numel(), T{0});
  return scratch;
}

}  // namespace

std::size_t window_out_len(std::size_t len, std::size_t kernel, std::size_t stride,
                           std::size_t padding) {
  if (stride == 0 || kernel == 0) throw std::invalid_argument("kernel and stride must be >= 1");
  if (len + 2 * padding < kernel) {
    throw ShapeError("window of " + std::to_string(kernel) + " does not fit length " +
                     std::to_string(len) + " with padding " + std::to_string(padding));
  }
  return (len + 2 * padding - kernel) / stride + 1;
}

template <typename T>
BatchNormStats<T>::BatchNormStats(std::size_t channels)
    : mean(Shape{channels}), var(Shape{channels}, std::vector<T>(channels, T{1})) {}

template <typename T>
Tensor<T> conv1d(Graph<T>& g, const Tensor<T>& x, const Tensor<T>& kernel, const Tensor<T>& bias,
                 std::size_t stride, std::size_t padding) {
  require_rank(x, 3, "conv1d", "input");
  require_rank(kernel, 3, "conv1d", "kernel");
  require_rank(bias, 1, "conv1d", "bias");
  if (kernel.dim(1) != x.dim(1)) {
    throw ShapeError("conv1d: input has " + std::to_string(x.dim(1)) +
                     " channels but kernel expects " + std::to_string(kernel.dim(1)) +
                     " (input " + shape_str(x.shape()) + ", kernel " + shape_str(kernel.shape()) + ")");
  }
  if (bias.dim(0) != kernel.dim(0)) {
    throw ShapeError("conv1d: bias " + shape_str(bias.shape()) + " does not match kernel " +
                     shape_str(kernel.shape()));
  }
  kernels::Conv1dDims d;
  d.batch = x.dim(0);
  d.in_channels = x.dim(1);
  d.in_len = x.dim(2);
  d.out_channels = kernel.dim(0);
  d.kernel = kernel.dim(2);
  d.stride = stride;
  d.padding = padding;
  const std::size_t lout = window_out_len(d.in_len, d.kernel, stride, padding);

  const bool tracked = g.tracks({&x, &kernel, &bias});
  Tensor<T> out(Shape{d.batch, d.out_channels, lout}, tracked);
  kernels::conv1d_forward<T>(d, x.data(), kernel.data(), bias.data(), out.data());
  if (tracked) {
    g.record([d, x, kernel, bias, out]() {
      if (x.requires_grad()) kernels::conv1d_backward_input<T>(d, out.grad(), kernel.data(), x.grad());
      if (kernel.requires_grad() || bias.requires_grad()) {
        std::vector<T> sw, sb;
        kernels::conv1d_backward_params<T>(d, out.grad(), x.data(), grad_or_scratch(kernel, sw),
                                           grad_or_scratch(bias, sb));
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> batchnorm1d(Graph<T>& g, const Tensor<T>& x, const Tensor<T>& gamma,
                      const Tensor<T>& beta, BatchNormStats<T>& stats, Mode mode,
                      bool update_running) {
  require_rank(x, 3, "batchnorm1d", "input");
  const std::size_t B = x.dim(0), C = x.dim(1), L = x.dim(2);
  if (gamma.numel() != C || beta.numel() != C || stats.mean.numel() != C) {
    throw ShapeError("batchnorm1d: parameters do not match " + std::to_string(C) + " channels");
  }
  const std::size_t n = B * L;
  const T eps = static_cast<T>(stats.eps);
  const bool tracked = g.tracks({&x, &gamma, &beta});
  Tensor<T> out(x.shape(), tracked);

  const auto xs = x.data();
  auto ys = out.data();
  const auto gs = gamma.data();
  const auto bs = beta.data();

  if (mode == Mode::kTrain) {
    if (n < 2) throw std::invalid_argument("batchnorm1d: train mode needs batch*length >= 2");
    // x_hat and 1/std per channel, kept for backward
    std::vector<T> xhat(x.numel());
    std::vector<T> inv_std(C);
    std::vector<T> batch_mean(C), batch_var(C);
#pragma omp parallel for schedule(static) if (x.numel() > 32768)
    for (std::int64_t ci = 0; ci < static_cast<std::int64_t>(C); ++ci) {
      const auto c = static_cast<std::size_t>(ci);
      T mean = 0;
      for (std::size_t b = 0; b < B; ++b)
        for (std::size_t l = 0; l < L; ++l) mean += xs[(b * C + c) * L + l];
      mean /= static_cast<T>(n);
      T var = 0;
      for (std::size_t b = 0; b < B; ++b)
        for (std::size_t l = 0; l < L; ++l) {
          const T dlt = xs[(b * C + c) * L + l] - mean;
          var += dlt * dlt;
        }
      var /= static_cast<T>(n);
      const T istd = T{1} / std::sqrt(var + eps);
      inv_std[c] = istd;
      batch_mean[c] = mean;
      batch_var[c] = var;
      for (std::size_t b = 0; b < B; ++b)
        for (std::size_t l = 0; l < L; ++l) {
          const std::size_t i = (b * C + c) * L + l;
          xhat[i] = (xs[i] - mean) * istd;
          ys[i] = gs[c] * xhat[i] + bs[c];
        }
    }
    if (update_running) {
      const T m = static_cast<T>(stats.momentum);
      auto rm = stats.mean.data();
      auto rv = stats.var.data();
      const T unbias = static_cast<T>(n) / static_cast<T>(n - 1);
      for (std::size_t c = 0; c < C; ++c) {
        rm[c] = (T{1} - m) * rm[c] + m * batch_mean[c];
        rv[c] = (T{1} - m) * rv[c] + m * batch_var[c] * unbias;
      }
    }
    if (tracked) {
      g.record([x, gamma, beta, out, xhat = std::move(xhat), inv_std = std::move(inv_std), B, C,
                L, n]() {
        const auto dy = out.grad();
        const auto gv = gamma.data();
        std::vector<T> dgamma(C), dbeta(C);
        for (std::size_t c = 0; c < C; ++c) {
          T sg = 0, sgx = 0;
          for (std::size_t b = 0; b < B; ++b)
            for (std::size_t l = 0; l < L; ++l) {
              const std::size_t i = (b * C + c) * L + l;
              sg += dy[i];
              sgx += dy[i] * xhat[i];
            }
          dbeta[c] = sg;
          dgamma[c] = sgx;
          if (x.requires_grad()) {
            auto dx = x.grad();
            const T k = gv[c] * inv_std[c] / static_cast<T>(n);
            for (std::size_t b = 0; b < B; ++b)
              for (std::size_t l = 0; l < L; ++l) {
                const std::size_t i = (b * C + c) * L + l;
                dx[i] += k * (static_cast<T>(n) * dy[i] - sg - xhat[i] * sgx);
              }
          }
        }
        if (gamma.requires_grad()) {
          auto dg = gamma.grad();
          for (std::size_t c = 0; c < C; ++c) dg[c] += dgamma[c];
        }
        if (beta.requires_grad()) {
          auto db = beta.grad();
          for (std::size_t c = 0; c < C; ++c) db[c] += dbeta[c];
        }
      });
    }
    return out;
  }

  const auto rm = stats.mean.data();
  const auto rv = stats.var.data();
  std::vector<T> inv_std(C);
  for (std::size_t c = 0; c < C; ++c) inv_std[c] = T{1} / std::sqrt(rv[c] + eps);
  for (std::size_t b = 0; b < B; ++b)
    for (std::size_t c = 0; c < C; ++c)
      for (std::size_t l = 0; l < L; ++l) {
        const std::size_t i = (b * C + c) * L + l;
        ys[i] = gs[c] * (xs[i] - rm[c]) * inv_std[c] + bs[c];
      }
  if (tracked) {
    std::vector<T> mean(rm.begin(), rm.end());
    g.record([x, gamma, beta, out, mean = std::move(mean), inv_std = std::move(inv_std), B, C,
              L]() {
      const auto dy = out.grad();
      const auto xv = x.data();
      const auto gv = gamma.data();
      std::span<T> dx;
      if (x.requires_grad()) dx = x.grad();
      for (std::size_t c = 0; c < C; ++c) {
        T sg = 0, sgx = 0;
        for (std::size_t b = 0; b < B; ++b)
          for (std::size_t l = 0; l < L; ++l) {
            const std::size_t i = (b * C + c) * L + l;
            sg += dy[i];
            sgx += dy[i] * (xv[i] - mean[c]) * inv_std[c];
            if (!dx.empty()) dx[i] += dy[i] * gv[c] * inv_std[c];
          }
        if (gamma.requires_grad()) gamma.grad()[c] += sgx;
        if (beta.requires_grad()) beta.grad()[c] += sg;
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> activation(Graph<T>& g, const Tensor<T>& x, Activation kind) {
  const bool tracked = g.tracks({&x});
  Tensor<T> out(x.shape(), tracked);
  const auto xs = x.data();
  auto ys = out.data();
  const std::size_t n = x.numel();
  if (kind == Activation::kRelu) {
    for (std::size_t i = 0; i < n; ++i) ys[i] = xs[i] > T{0} ? xs[i] : T{0};
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const T v = xs[i];
      if (v >= T{0}) {
        ys[i] = T{1} / (T{1} + std::exp(-v));
      } else {
        const T e = std::exp(v);
        ys[i] = e / (T{1} + e);
      }
    }
  }
  if (tracked) {
    g.record([x, out, kind, n]() {
      const auto dy = out.grad();
      auto dx = x.grad();
      if (kind == Activation::kRelu) {
        const auto xs = x.data();
        for (std::size_t i = 0; i < n; ++i)
          if (xs[i] > T{0}) dx[i] += dy[i];
      } else {
        const auto ys = out.data();
        for (std::size_t i = 0; i < n; ++i) dx[i] += dy[i] * ys[i] * (T{1} - ys[i]);
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> maxpool1d(Graph<T>& g, const Tensor<T>& x, std::size_t kernel, std::size_t stride,
                    std::size_t padding) {
  require_rank(x, 3, "maxpool1d", "input");
  if (kernel == 0) throw std::invalid_argument("maxpool1d: kernel must be >= 1");
  if (padding >= kernel) throw std::invalid_argument("maxpool1d: padding must be < kernel");
  const std::size_t B = x.dim(0), C = x.dim(1), L = x.dim(2);
  const std::size_t lout = window_out_len(L, kernel, stride, padding);
  const bool tracked = g.tracks({&x});
  Tensor<T> out(Shape{B, C, lout}, tracked);
  std::vector<std::size_t> argmax(B * C * lout);
  const auto xs = x.data();
  auto ys = out.data();
  for (std::size_t row = 0; row < B * C; ++row) {
    const T* in = xs.data() + row * L;
    for (std::size_t l = 0; l < lout; ++l) {
      const auto start = static_cast<std::int64_t>(l * stride) - static_cast<std::int64_t>(padding);
      std::size_t best = 0;
      T best_v = -std::numeric_limits<T>::infinity();
      bool found = false;
      for (std::size_t k = 0; k < kernel; ++k) {
        const std::int64_t idx = start + static_cast<std::int64_t>(k);
        if (idx < 0 || idx >= static_cast<std::int64_t>(L)) continue;
        const T v = in[idx];
        if (!found || v > best_v) {
          best_v = v;
          best = static_cast<std::size_t>(idx);
          found = true;
        }
      }
      ys[row * lout + l] = best_v;
      argmax[row * lout + l] = row * L + best;
    }
  }
  if (tracked) {
    g.record([x, out, argmax = std::move(argmax)]() {
      const auto dy = out.grad();
      auto dx = x.grad();
      for (std::size_t i = 0; i < argmax.size(); ++i) dx[argmax[i]] += dy[i];
    });
  }
  return out;
}

template <typename T>
Tensor<T> global_avg_pool1d(Graph<T>& g, const Tensor<T>& x) {
  require_rank(x, 3, "global_avg_pool1d", "input");
  const std::size_t B = x.dim(0), C = x.dim(1), L = x.dim(2);
  const bool tracked = g.tracks({&x});
  Tensor<T> out(Shape{B, C}, tracked);
  const auto xs = x.data();
  auto ys = out.data();
  for (std::size_t row = 0; row < B * C; ++row) {
    T acc = 0;
    for (std::size_t l = 0; l < L; ++l) acc += xs[row * L + l];
    ys[row] = acc / static_cast<T>(L);
  }
  if (tracked) {
    g.record([x, out, B, C, L]() {
      const auto dy = out.grad();
      auto dx = x.grad();
      const T inv = T{1} / static_cast<T>(L);
      for (std::size_t row = 0; row < B * C; ++row)
        for (std::size_t l = 0; l < L; ++l) dx[row * L + l] += dy[row] * inv;
    });
  }
  return out;
}

template <typename T>
Tensor<T> linear(Graph<T>& g, const Tensor<T>& x, const Tensor<T>& weight, const Tensor<T>& bias) {
  require_rank(x, 2, "linear", "input");
  require_rank(weight, 2, "linear", "weight");
  require_rank(bias, 1, "linear", "bias");
  if (weight.dim(1) != x.dim(1)) {
    throw ShapeError("linear: input " + shape_str(x.shape()) + " does not match weight " +
                     shape_str(weight.shape()));
  }
  if (bias.dim(0) != weight.dim(0)) {
    throw ShapeError("linear: bias " + shape_str(bias.shape()) + " does not match weight " +
                     shape_str(weight.shape()));
  }
  kernels::LinearDims d{x.dim(0), x.dim(1), weight.dim(0)};
  const bool tracked = g.tracks({&x, &weight, &bias});
  Tensor<T> out(Shape{d.batch, d.out_features}, tracked);
  kernels::linear_forward<T>(d, x.data(), weight.data(), bias.data(), out.data());
  if (tracked) {
    g.record([d, x, weight, bias, out]() {
      if (x.requires_grad()) kernels::linear_backward_input<T>(d, out.grad(), weight.data(), x.grad());
      if (weight.requires_grad() || bias.requires_grad()) {
        std::vector<T> sw, sb;
        kernels::linear_backward_params<T>(d, out.grad(), x.data(), grad_or_scratch(weight, sw),
                                           grad_or_scratch(bias, sb));
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> softmax(Graph<T>& g, const Tensor<T>& x) {
  require_rank(x, 2, "softmax", "input");
  const std::size_t B = x.dim(0), K = x.dim(1);
  const bool tracked = g.tracks({&x});
  Tensor<T> out(x.shape(), tracked);
  const auto xs = x.data();
  auto ys = out.data();
  for (std::size_t b = 0; b < B; ++b) {
    const T* in = xs.data() + b * K;
    T* o = ys.data() + b * K;
    const T mx = *std::max_element(in, in + K);
    T z = 0;
    for (std::size_t k = 0; k < K; ++k) {
      o[k] = std::exp(in[k] - mx);
      z += o[k];
    }
    for (std::size_t k = 0; k < K; ++k) o[k] /= z;
  }
  if (tracked) {
    g.record([x, out, B, K]() {
      const auto dy = out.grad();
      const auto ys = out.data();
      auto dx = x.grad();
      for (std::size_t b = 0; b < B; ++b) {
        T dot = 0;
        for (std::size_t k = 0; k < K; ++k) dot += dy[b * K + k] * ys[b * K + k];
        for (std::size_t k = 0; k < K; ++k) dx[b * K + k] += ys[b * K + k] * (dy[b * K + k] - dot);
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> add(Graph<T>& g, const Tensor<T>& a, const Tensor<T>& b) {
  require_same_shape(a, b, "add");
  const bool tracked = g.tracks({&a, &b});
  Tensor<T> out(a.shape(), tracked);
  const auto as = a.data();
  const auto bs = b.data();
  auto ys = out.data();
  for (std::size_t i = 0; i < ys.size(); ++i) ys[i] = as[i] + bs[i];
  if (tracked) {
    g.record([a, b, out]() {
      const auto dy = out.grad();
      if (a.requires_grad()) {
        auto da = a.grad();
        for (std::size_t i = 0; i < dy.size(); ++i) da[i] += dy[i];
      }
      if (b.requires_grad()) {
        auto db = b.grad();
        for (std::size_t i = 0; i < dy.size(); ++i) db[i] += dy[i];
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> scale(Graph<T>& g, const Tensor<T>& a, T factor) {
  const bool tracked = g.tracks({&a});
  Tensor<T> out(a.shape(), tracked);
  const auto as = a.data();
  auto ys = out.data();
  for (std::size_t i = 0; i < ys.size(); ++i) ys[i] = as[i] * factor;
  if (tracked) {
    g.record([a, out, factor]() {
      const auto dy = out.grad();
      auto da = a.grad();
      for (std::size_t i = 0; i < dy.size(); ++i) da[i] += dy[i] * factor;
    });
  }
  return out;
}

template <typename T>
Tensor<T> mul(Graph<T>& g, const Tensor<T>& a, const Tensor<T>& b) {
  require_same_shape(a, b, "mul");
  const bool tracked = g.tracks({&a, &b});
  Tensor<T> out(a.shape(), tracked);
  const auto as = a.data();
  const auto bs = b.data();
  auto ys = out.data();
  for (std::size_t i = 0; i < ys.size(); ++i) ys[i] = as[i] * bs[i];
  if (tracked) {
    g.record([a, b, out]() {
      const auto dy = out.grad();
      const auto av = a.data();
      const auto bv = b.data();
      if (a.requires_grad()) {
        auto da = a.grad();
        for (std::size_t i = 0; i < dy.size(); ++i) da[i] += dy[i] * bv[i];
      }
      if (b.requires_grad()) {
        auto db = b.grad();
        for (std::size_t i = 0; i < dy.size(); ++i) db[i] += dy[i] * av[i];
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> sum(Graph<T>& g, const Tensor<T>& a) {
  const bool tracked = g.tracks({&a});
  T acc = 0;
  for (const T v : a.data()) acc += v;
  Tensor<T> out(Shape{1}, std::vector<T>{acc}, tracked);
  if (tracked) {
    g.record([a, out]() {
      const T dy = out.grad()[0];
      for (auto& v : a.grad()) v += dy;
    });
  }
  return out;
}

template <typename T>
Tensor<T> channel_scale(Graph<T>& g, const Tensor<T>& x, const Tensor<T>& s) {
  require_rank(x, 3, "channel_scale", "input");
  require_rank(s, 2, "channel_scale", "gate");
  const std::size_t B = x.dim(0), C = x.dim(1), L = x.dim(2);
  if (s.dim(0) != B || s.dim(1) != C) {
    throw ShapeError("channel_scale: gate " + shape_str(s.shape()) + " does not match input " +
                     shape_str(x.shape()));
  }
  const bool tracked = g.tracks({&x, &s});
  Tensor<T> out(x.shape(), tracked);
  const auto xs = x.data();
  const auto ss = s.data();
  auto ys = out.data();
  for (std::size_t row = 0; row < B * C; ++row)
    for (std::size_t l = 0; l < L; ++l) ys[row * L + l] = xs[row * L + l] * ss[row];
  if (tracked) {
    g.record([x, s, out, B, C, L]() {
      const auto dy = out.grad();
      const auto xv = x.data();
      const auto sv = s.data();
      std::span<T> dx;
      if (x.requires_grad()) dx = x.grad();
      for (std::size_t row = 0; row < B * C; ++row) {
        T acc = 0;
        for (std::size_t l = 0; l < L; ++l) {
          acc += dy[row * L + l] * xv[row * L + l];
          if (!dx.empty()) dx[row * L + l] += dy[row * L + l] * sv[row];
        }
        if (s.requires_grad()) s.grad()[row] += acc;
      }
    });
  }
  return out;
}

#define CSISENSE_INSTANTIATE(T)                                                                    \
  template struct BatchNormStats<T>;                                                               \
  template Tensor<T> conv1d(Graph<T>&, const Tensor<T>&, const Tensor<T>&, const Tensor<T>&,       \
                            std::size_t, std::size_t);                                             \
  template Tensor<T> batchnorm1d(Graph<T>&, const Tensor<T>&, const Tensor<T>&, const Tensor<T>&,  \
                                 BatchNormStats<T>&, Mode, bool);                                  \
  template Tensor<T> activation(Graph<T>&, const Tensor<T>&, Activation);                          \
  template Tensor<T> maxpool1d(Graph<T>&, const Tensor<T>&, std::size_t, std::size_t, std::size_t); \
  template Tensor<T> global_avg_pool1d(Graph<T>&, const Tensor<T>&);                               \
  template Tensor<T> linear(Graph<T>&, const Tensor<T>&, const Tensor<T>&, const Tensor<T>&);      \
  template Tensor<T> softmax(Graph<T>&, const Tensor<T>&);                                         \
  template Tensor<T> add(Graph<T>&, const Tensor<T>&, const Tensor<T>&);                           \
  template Tensor<T> scale(Graph<T>&, const Tensor<T>&, T);                                        \
  template Tensor<T> mul(Graph<T>&, const Tensor<T>&, const Tensor<T>&);                           \
  template Tensor<T> sum(Graph<T>&, const Tensor<T>&);                                             \
  template Tensor<T> channel_scale(Graph<T>&, const Tensor<T>&, const Tensor<T>&);

CSISENSE_INSTANTIATE(float)
CSISENSE_INSTANTIATE(double)
#undef CSISENSE_INSTANTIATE

}  // namespace csisense
