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

#include <cstdint>

namespace csisense::kernels::serial {

namespace {
// Input index read by output position l at tap k, or -1 inside the padding.
inline std::int64_t tap_index(const Conv1dDims& d, std::size_t l, std::size_t k) {
  const auto idx = static_cast<std::int64_t>(l * d.stride + k) - static_cast<std::int64_t>(d.padding);
  return (idx < 0 || idx >= static_cast<std::int64_t>(d.in_len)) ? -1 : idx;
}
}  // namespace

template <typename T>
void conv1d_forward(const Conv1dDims& d, std::span<const T> x, std::span<const T> w,
                    std::span<const T> bias, std::span<T> y) {
  const std::size_t lout = d.out_len();
  for (std::size_t b = 0; b < d.batch; ++b) {
    for (std::size_t co = 0; co < d.out_channels; ++co) {
      for (std::size_t l = 0; l < lout; ++l) {
        T acc = bias[co];
        for (std::size_t ci = 0; ci < d.in_channels; ++ci) {
          for (std::size_t k = 0; k < d.kernel; ++k) {
            const auto idx = tap_index(d, l, k);
            if (idx < 0) continue;
            acc += w[(co * d.in_channels + ci) * d.kernel + k] *
                   x[(b * d.in_channels + ci) * d.in_len + static_cast<std::size_t>(idx)];
          }
        }
        y[(b * d.out_channels + co) * lout + l] = acc;
      }
    }
  }
}

template <typename T>
void conv1d_backward_input(const Conv1dDims& d, std::span<const T> dy, std::span<const T> w,
                           std::span<T> dx) {
  const std::size_t lout = d.out_len();
  for (std::size_t b = 0; b < d.batch; ++b) {
    for (std::size_t co = 0; co < d.out_channels; ++co) {
      for (std::size_t l = 0; l < lout; ++l) {
        const T g = dy[(b * d.out_channels + co) * lout + l];
        for (std::size_t ci = 0; ci < d.in_channels; ++ci) {
          for (std::size_t k = 0; k < d.kernel; ++k) {
            const auto idx = tap_index(d, l, k);
            if (idx < 0) continue;
            dx[(b * d.in_channels + ci) * d.in_len + static_cast<std::size_t>(idx)] +=
                g * w[(co * d.in_channels + ci) * d.kernel + k];
          }
        }
      }
    }
  }
}

template <typename T>
void conv1d_backward_params(const Conv1dDims& d, std::span<const T> dy, std::span<const T> x,
                            std::span<T> dw, std::span<T> dbias) {
  const std::size_t lout = d.out_len();
  for (std::size_t b = 0; b < d.batch; ++b) {
    for (std::size_t co = 0; co < d.out_channels; ++co) {
      for (std::size_t l = 0; l < lout; ++l) {
        const T g = dy[(b * d.out_channels + co) * lout + l];
        dbias[co] += g;
        for (std::size_t ci = 0; ci < d.in_channels; ++ci) {
          for (std::size_t k = 0; k < d.kernel; ++k) {
            const auto idx = tap_index(d, l, k);
            if (idx < 0) continue;
            dw[(co * d.in_channels + ci) * d.kernel + k] +=
                g * x[(b * d.in_channels + ci) * d.in_len + static_cast<std::size_t>(idx)];
          }
        }
      }
    }
  }
}

template <typename T>
void linear_forward(const LinearDims& d, std::span<const T> x, std::span<const T> w,
                    std::span<const T> bias, std::span<T> y) {
  for (std::size_t b = 0; b < d.batch; ++b) {
    for (std::size_t o = 0; o < d.out_features; ++o) {
      T acc = bias[o];
      for (std::size_t i = 0; i < d.in_features; ++i) {
        acc += w[o * d.in_features + i] * x[b * d.in_features + i];
      }
      y[b * d.out_features + o] = acc;
    }
  }
}

template <typename T>
void linear_backward_input(const LinearDims& d, std::span<const T> dy, std::span<const T> w,
                           std::span<T> dx) {
  for (std::size_t b = 0; b < d.batch; ++b) {
    for (std::size_t o = 0; o < d.out_features; ++o) {
      const T g = dy[b * d.out_features + o];
      for (std::size_t i = 0; i < d.in_features; ++i) {
        dx[b * d.in_features + i] += g * w[o * d.in_features + i];
      }
    }
  }
}

template <typename T>
void linear_backward_params(const LinearDims& d, std::span<const T> dy, std::span<const T> x,
                            std::span<T> dw, std::span<T> dbias) {
  for (std::size_t b = 0; b < d.batch; ++b) {
    for (std::size_t o = 0; o < d.out_features; ++o) {
      const T g = dy[b * d.out_features + o];
      dbias[o] += g;
      for (std::size_t i = 0; i < d.in_features; ++i) {
        dw[o * d.in_features + i] += g * x[b * d.in_features + i];
      }
    }
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

}  // namespace csisense::kernels::serial
