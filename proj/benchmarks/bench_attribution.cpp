/*
 * Copyright 2026 The taylorx Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <benchmark/benchmark.h>

#include "taylorx/attribution.hpp"
#include "taylorx/backprop.hpp"
#include "taylorx/datasets.hpp"
#include "taylorx/harsanyi.hpp"
#include "taylorx/taylor.hpp"
#include "taylorx/training.hpp"

namespace tx = taylorx;

namespace {

tx::Model mlp(std::size_t n) {
  return tx::random_mlp({n, 8, 4, 1}, tx::Activation::sigmoid(),
                        tx::Activation::identity(), 1);
}

void BM_Expand(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const int order = static_cast<int>(state.range(1));
  const tx::Model m = mlp(n);
  const tx::Vector x = tx::gaussian_samples(n, 1, 2)[0];
  const tx::Vector b(n, 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tx::expand(m, x, b, order));
  }
  state.counters["terms"] =
      static_cast<double>(tx::expand(m, x, b, order).terms().size());
}
BENCHMARK(BM_Expand)->Args({6, 2})->Args({6, 3})->Args({10, 2})->Args({10, 3});

void BM_Harsanyi(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const tx::Model m = mlp(n);
  const tx::Vector x = tx::gaussian_samples(n, 1, 3)[0];
  const tx::Vector b(n, 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tx::harsanyi(m, x, b));
  }
}
BENCHMARK(BM_Harsanyi)->DenseRange(6, 12, 2);

void BM_Shapley(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const tx::Model m = mlp(n);
  const tx::Vector x = tx::gaussian_samples(n, 1, 4)[0];
  const tx::Vector b(n, 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tx::shapley_exact(m, x, b));
  }
}
BENCHMARK(BM_Shapley)->DenseRange(6, 12, 2);

void BM_DeepShap(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const tx::Model m = mlp(n);
  const tx::Vector x = tx::gaussian_samples(n, 1, 5)[0];
  const tx::Vector b(n, 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tx::deep_shap(m, x, b));
  }
}
BENCHMARK(BM_DeepShap)->DenseRange(4, 8, 2);

void BM_IntegratedGradients(benchmark::State& state) {
  const tx::Model m = mlp(10);
  const tx::Vector x = tx::gaussian_samples(10, 1, 6)[0];
  const tx::Vector b(10, 0.0);
  const auto steps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(tx::integrated_gradients(
        m, x, b, steps, tx::Quadrature::kMidpoint));
  }
}
BENCHMARK(BM_IntegratedGradients)->RangeMultiplier(4)->Range(64, 1024);

}  // namespace

BENCHMARK_MAIN();
