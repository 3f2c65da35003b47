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

#include "csisense/kernels.hpp"

#include <algorithm>
#include <cstdint>

namespace csisense::kernels {

namespace {

constexpr std::size_t kParallelMinWork = 1 << 15;

// Output positions [lo, hi) whose tap k lands inside the unpadded input.
struct TapRange {
  std::size_t lo;
  std::size_t hi;
};

inline TapRange tap_range(const Conv1dDims& d, std::size_t k, std::size_t lout) {
  TapRange r{0, 0};
  if (d.in_len - 1 + d.padding < k) return r;
  r.lo = k >= d.padding ? 0 : (d.padding - k + d.stride - 1) / d.stride;
  r.hi = std::min(lout, (d.in_len - 1 + d.padding - k) / d.stride + 1);
  if (r.hi < r.lo) r.hi = r.lo;
  return r;
}

}  // namespace

template <typename T>
void conv1d_forward(const Conv1dDims& d, std::span<const T> x, std::span<const T> w,
                    std::span<const T> bias, std::span<T> y) {
  const std::size_t lout = d.out_len();
  const auto rows = static_cast<std::int64_t>(d.batch * d.out_channels);
  const std::size_t work = d.batch * d.out_channels * lout * d.in_channels * d.kernel;
#pragma omp parallel for schedule(static) if (work > kParallelMinWork)
  for (std::int64_t row = 0; row < rows; ++row) {
    const std::size_t b = static_cast<std::size_t>(row) / d.out_channels;
    const std::size_t co = static_cast<std::size_t>(row) % d.out_channels;
    T* out = y.data() + static_cast<std::size_t>(row) * lout;
    std::fill(out, out + lout, bias[co]);
    for (std::size_t ci = 0; ci < d.in_channels; ++ci) {
      const T* in = x.data() + (b * d.in_channels + ci) * d.in_len;
      const T* taps = w.data() + (co * d.in_channels + ci) * d.kernel;
      for (std::size_t k = 0; k < d.kernel; ++k) {
        const T wk = taps[k];
        const auto r = tap_range(d, k, lout);
        const T* src = in + (r.lo * d.stride + k - d.padding);
        if (d.stride == 1) {
          for (std::size_t l = r.lo; l < r.hi; ++l) out[l] += wk * src[l - r.lo];
        } else {
          for (std::size_t l = r.lo; l < r.hi; ++l) out[l] += wk * src[(l - r.lo) * d.stride];
        }
      }
    }
  }
}

template <typename T>
void conv1d_backward_input(const Conv1dDims& d, std::span<const T> dy, std::span<const T> w,
                           std::span<T> dx) {
  const std::size_t lout = d.out_len();
  const auto rows = static_cast<std::int64_t>(d.batch * d.in_channels);
  const std::size_t work = d.batch * d.out_channels * lout * d.in_channels * d.kernel;
#pragma omp parallel for schedule(static) if (work > kParallelMinWork)
  for (std::int64_t row = 0; row < rows; ++row) {
    const std::size_t b = static_cast<std::size_t>(row) / d.in_channels;
    const std::size_t ci = static_cast<std::size_t>(row) % d.in_channels;
    T* grad_in = dx.data() + static_cast<std::size_t>(row) * d.in_len;
    for (std::size_t co = 0; co < d.out_channels; ++co) {
      const T* g = dy.data() + (b * d.out_channels + co) * lout;
      const T* taps = w.data() + (co * d.in_channels + ci) * d.kernel;
      for (std::size_t k = 0; k < d.kernel; ++k) {
        const T wk = taps[k];
        const auto r = tap_range(d, k, lout);
        T* dst = grad_in + (r.lo * d.stride + k - d.padding);
        for (std::size_t l = r.lo; l < r.hi; ++l) dst[(l - r.lo) * d.stride] += wk * g[l];
      }
    }
  }
}

template <typename T>
void conv1d_backward_params(const Conv1dDims& d, std::span<const T> dy, std::span<const T> x,
                            std::span<T> dw, std::span<T> dbias) {
  const std::size_t lout = d.out_len();
  const auto outs = static_cast<std::int64_t>(d.out_channels);
  const std::size_t work = d.batch * d.out_channels * lout * d.in_channels * d.kernel;
#pragma omp parallel for schedule(static) if (work > kParallelMinWork)
  for (std::int64_t co_i = 0; co_i < outs; ++co_i) {
    const auto co = static_cast<std::size_t>(co_i);
    T bias_acc = 0;
    for (std::size_t b = 0; b < d.batch; ++b) {
      const T* g = dy.data() + (b * d.out_channels + co) * lout;
      for (std::size_t l = 0; l < lout; ++l) bias_acc += g[l];
    }
    dbias[co] += bias_acc;
    for (std::size_t ci = 0; ci < d.in_channels; ++ci) {
      T* taps = dw.data() + (co * d.in_channels + ci) * d.kernel;
      for (std::size_t k = 0; k < d.kernel; ++k) {
        const auto r = tap_range(d, k, lout);
        T acc = 0;
        for (std::size_t b = 0; b < d.batch; ++b) {
          const T* g = dy.data() + (b * d.out_channels + co) * lout;
          const T* src = x.data() + (b * d.in_channels + ci) * d.in_len + (r.lo * d.stride + k - d.padding);
          for (std::size_t l = r.lo; l < r.hi; ++l) acc += g[l] * src[(l - r.lo) * d.stride];
        }
        taps[k] += acc;
      }
    }
  }
}

template <typename T>
void linear_forward(const LinearDims& d, std::span<const T> x, std::span<const T> w,
                    std::span<const T> bias, std::span<T> y) {
  const auto rows = static_cast<std::int64_t>(d.batch * d.out_features);
  const std::size_t work = d.batch * d.out_features * d.in_features;
#pragma omp parallel for schedule(static) if (work > kParallelMinWork)
  for (std::int64_t row = 0; row < rows; ++row) {
    const std::size_t b = static_cast<std::size_t>(row) / d.out_features;
    const std::size_t o = static_cast<std::size_t>(row) % d.out_features;
    const T* xr = x.data() + b * d.in_features;
    const T* wr = w.data() + o * d.in_features;
    T acc = bias[o];
    for (std::size_t i = 0; i < d.in_features; ++i) acc += wr[i] * xr[i];
    y[static_cast<std::size_t>(row)] = acc;
  }
}

template <typename T>
void linear_backward_input(const LinearDims& d, std::span<const T> dy, std::span<const T> w,
                           std::span<T> dx) {
  const auto rows = static_cast<std::int64_t>(d.batch);
  const std::size_t work = d.batch * d.out_features * d.in_features;
#pragma omp parallel for schedule(static) if (work > kParallelMinWork)
  for (std::int64_t b_i = 0; b_i < rows; ++b_i) {
    const auto b = static_cast<std::size_t>(b_i);
    T* dxr = dx.data() + b * d.in_features;
    for (std::size_t o = 0; o < d.out_features; ++o) {
      const T g = dy[b * d.out_features + o];
      const T* wr = w.data() + o * d.in_features;
      for (std::size_t i = 0; i < d.in_features; ++i) dxr[i] += g * wr[i];
    }
  }
}

template <typename T>
void linear_backward_params(const LinearDims& d, std::span<const T> dy, std::span<const T> x,
                            std::span<T> dw, std::span<T> dbias) {
  const auto outs = static_cast<std::int64_t>(d.out_features);
  const std::size_t work = d.batch * d.out_features * d.in_features;
#pragma omp parallel for schedule(static) if (work > kParallelMinWork)
  for (std::int64_t o_i = 0; o_i < outs; ++o_i) {
    const auto o = static_cast<std::size_t>(o_i);
    T* dwr = dw.data() + o * d.in_features;
    T bias_acc = 0;
    for (std::size_t b = 0; b < d.batch; ++b) {
      const T g = dy[b * d.out_features + o];
      bias_acc += g;
      const T* xr = x.data() + b * d.in_features;
      for (std::size_t i = 0; i < d.in_features; ++i) dwr[i] += g * xr[i];
    }
    dbias[o] += bias_acc;
  }
}

#define CSISENSE_INSTANTIATE(T)                                                                   \
  template void conv1d_forward<T>(const Conv1dDims&, std::span<const T>, std::span<const T>,      \
                                  std::span<const T>, std::span<T>);                              \
  template void conv1d_backward_input<T>(const Conv1dDims&, std::span<const T>,                   \
                                         std::span<const T>, std::span<T>);                       \
  template void conv1d_backward_params<T>(const Conv1dDims&, std::span<const T>,                  \
                                          std::span<const T>, std::span<T>, std::span<T>);        \
  template void linear_forward<T>(const LinearDims&, std::span<const T>, std::span<const T>,      \
                                  std::span<const T>, std::span<T>);                              \
  template void linear_backward_input<T>(const LinearDims&, std::span<const T>,                   \
                                         std::span<const T>, std::span<T>);                       \
  template void linear_backward_params<T>(const LinearDims&, std::span<const T>,                  \
                                          std::span<const T>, std::span<T>, std::span<T>);

CSISENSE_INSTANTIATE(float)
CSISENSE_INSTANTIATE(double)
#undef CSISENSE_INSTANTIATE

}  // namespace csisense::kernels
