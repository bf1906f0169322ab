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

#include "taylorx/datasets.hpp"

#include <cmath>
#include <random>
#include <tuple>
#include <vector>

#include "taylorx/error.hpp"
#include "taylorx/random.hpp"

namespace taylorx {

std::vector<Vector> gaussian_samples(std::size_t n, std::size_t count,
                                     std::uint64_t seed, double mean,
                                     double sd) {
  auto engine = make_engine(seed, "gaussian_samples");
  std::normal_distribution<double> normal(mean, sd);
  std::vector<Vector> out(count, Vector(n));
  for (Vector& v : out) {
    for (double& x : v) x = normal(engine);
  }
  return out;
}

Model random_polynomial_deg2(std::size_t n, std::uint64_t seed, double scale) {
  auto engine = make_engine(seed, "polynomial_deg2");
  std::normal_distribution<double> normal(0.0, scale);
  Vector linear(n);
  for (double& c : linear) c = normal(engine);
  std::vector<std::tuple<std::size_t, std::size_t, double>> quad;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) quad.emplace_back(i, j, normal(engine));
  }
  return Model::polynomial_deg2(n, linear, quad);
}

Dataset smooth_regression(std::size_t n, std::size_t count,
                          std::uint64_t seed) {
  if (n < 2) throw DimensionError("smooth regression needs two inputs");
  Dataset d;
  d.num_inputs = n;
  d.grid = {1, n};
  d.inputs = gaussian_samples(n, count, seed);
  for (const Vector& x : d.inputs) {
    double y = 0.2 * std::tanh(x[0] + x[1]);
    for (std::size_t i = 0; i < n; ++i) {
      y += 0.5 * std::sin(x[i]) + 0.3 * x[i] * x[(i + 1) % n] / n;
    }
    d.targets.push_back(y);
  }
  d.boxes.assign(count, VarSet());
  return d;
}

Dataset planted_box(GridShape grid, std::size_t count, std::uint64_t seed) {
  if (grid.rows < 3 && grid.cols < 3) {
    throw DimensionError("planted bars need a side of at least 3");
  }
  auto engine = make_engine(seed, "planted_box");
  std::uniform_real_distribution<double> noise(0.0, 0.3);
  std::uniform_real_distribution<double> bright(0.7, 1.0);
  std::bernoulli_distribution coin(0.5);
  Dataset d;
  d.num_inputs = grid.size();
  d.grid = grid;
  for (std::size_t s = 0; s < count; ++s) {
    Vector x(grid.size());
    for (double& v : x) v = noise(engine);
    VarSet box;
    const bool positive = s % 2 == 0;
    if (positive) {
      bool horizontal = grid.cols >= 3 && (grid.rows < 3 || coin(engine));
      std::size_t h = horizontal ? 1 : 3;
      std::size_t w = horizontal ? 3 : 1;
      std::uniform_int_distribution<std::size_t> row(0, grid.rows - h);
      std::uniform_int_distribution<std::size_t> col(0, grid.cols - w);
      std::size_t r0 = row(engine);
      std::size_t c0 = col(engine);
      for (std::size_t r = r0; r < r0 + h; ++r) {
        for (std::size_t c = c0; c < c0 + w; ++c) {
          x[r * grid.cols + c] = bright(engine);
          box = box.with(r * grid.cols + c);
        }
      }
    }
    d.inputs.push_back(std::move(x));
    d.targets.push_back(positive ? 1.0 : 0.0);
    d.boxes.push_back(box);
  }
  return d;
}

}  // namespace taylorx
