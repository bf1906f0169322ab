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

#ifndef TAYLORX_DATASETS_HPP_
#define TAYLORX_DATASETS_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "taylorx/metrics.hpp"
#include "taylorx/model.hpp"
#include "taylorx/types.hpp"

namespace taylorx {

struct Dataset {
  std::size_t num_inputs = 0;
  GridShape grid;
  std::vector<Vector> inputs;
  Vector targets;
  // Planted box per sample; empty when the sample has none.
  std::vector<VarSet> boxes;
};

// `count` vectors with i.i.d. N(mean, sd^2) entries.
std::vector<Vector> gaussian_samples(std::size_t n, std::size_t count,
                                     std::uint64_t seed, double mean = 0.0,
                                     double sd = 1.0);

// Degree-2 polynomial with every linear and pairwise (including square)
// coefficient drawn from N(0, scale^2).
Model random_polynomial_deg2(std::size_t n, std::uint64_t seed,
                             double scale = 1.0);

// Inputs N(0, 1); target a smooth nonlinear function mixing sines and
// pairwise products of the inputs.
Dataset smooth_regression(std::size_t n, std::size_t count,
                          std::uint64_t seed);

// Grid images in [0, 0.3] noise. Positive samples (target 1) carry a bright
// 1 x 3 or 3 x 1 bar recorded in boxes.
Dataset planted_box(GridShape grid, std::size_t count, std::uint64_t seed);

}  // namespace taylorx

#endif  // TAYLORX_DATASETS_HPP_
