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

// Serial reference kernels against the OpenMP versions on encoder-shaped
// problems. Run with OMP_NUM_THREADS set to compare thread counts.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "csisense/kernels.hpp"

namespace k = csisense::kernels;

namespace {

std::vector<float> filled(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  std::vector<float> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

// (in_channels, out_channels, in_len, kernel, stride) of representative layers.
k::Conv1dDims conv_dims(const benchmark::State& state) {
  k::Conv1dDims d;
  d.batch = 32;
  d.in_channels = static_cast<std::size_t>(state.range(0));
  d.out_channels = static_cast<std::size_t>(state.range(1));
  d.in_len = static_cast<std::size_t>(state.range(2));
  d.kernel = static_cast<std::size_t>(state.range(3));
  d.stride = static_cast<std::size_t>(state.range(4));
  d.padding = d.kernel / 2;
  return d;
}

void conv_args(benchmark::internal::Benchmark* b) {
  b->Args({52, 64, 100, 7, 2});   // stem
  b->Args({64, 64, 25, 3, 1});    // layer1
  b->Args({128, 256, 13, 3, 2});  // layer3 entry
  b->Args({256, 256, 7, 3, 1});   // layer3
  b->Unit(benchmark::kMicrosecond);
}

template <bool Parallel>
void BM_ConvForward(benchmark::State& state) {
  const auto d = conv_dims(state);
  const auto x = filled(d.batch * d.in_channels * d.in_len, 1);
  const auto w = filled(d.out_channels * d.in_channels * d.kernel, 2);
  const auto b = filled(d.out_channels, 3);
  std::vector<float> y(d.batch * d.out_channels * d.out_len());
  for (auto _ : state) {
    if constexpr (Parallel) k::conv1d_forward<float>(d, x, w, b, y);
    else k::serial::conv1d_forward<float>(d, x, w, b, y);
    benchmark::DoNotOptimize(y.data());
  }
}

template <bool Parallel>
void BM_ConvBackward(benchmark::State& state) {
  const auto d = conv_dims(state);
  const auto x = filled(d.batch * d.in_channels * d.in_len, 1);
  const auto w = filled(d.out_channels * d.in_channels * d.kernel, 2);
  const auto dy = filled(d.batch * d.out_channels * d.out_len(), 3);
  std::vector<float> dx(x.size()), dw(w.size()), db(d.out_channels);
  for (auto _ : state) {
    if constexpr (Parallel) {
      k::conv1d_backward_input<float>(d, dy, w, dx);
      k::conv1d_backward_params<float>(d, dy, x, dw, db);
    } else {
      k::serial::conv1d_backward_input<float>(d, dy, w, dx);
      k::serial::conv1d_backward_params<float>(d, dy, x, dw, db);
    }
    benchmark::DoNotOptimize(dx.data());
    benchmark::DoNotOptimize(dw.data());
  }
}

template <bool Parallel>
void BM_Linear(benchmark::State& state) {
  k::LinearDims d{static_cast<std::size_t>(state.range(0)), 256, 128};
  const auto x = filled(d.batch * d.in_features, 1);
  const auto w = filled(d.out_features * d.in_features, 2);
  const auto b = filled(d.out_features, 3);
  std::vector<float> y(d.batch * d.out_features);
  for (auto _ : state) {
    if constexpr (Parallel) k::linear_forward<float>(d, x, w, b, y);
    else k::serial::linear_forward<float>(d, x, w, b, y);
    benchmark::DoNotOptimize(y.data());
  }
}

}  // namespace

BENCHMARK(BM_ConvForward<false>)->Name("conv1d_forward/serial")->Apply(conv_args);
BENCHMARK(BM_ConvForward<true>)->Name("conv1d_forward/parallel")->Apply(conv_args);
BENCHMARK(BM_ConvBackward<false>)->Name("conv1d_backward/serial")->Apply(conv_args);
BENCHMARK(BM_ConvBackward<true>)->Name("conv1d_backward/parallel")->Apply(conv_args);
BENCHMARK(BM_Linear<false>)->Name("linear_forward/serial")->Arg(32)->Arg(256)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Linear<true>)->Name("linear_forward/parallel")->Arg(32)->Arg(256)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
