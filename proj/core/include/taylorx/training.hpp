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

#ifndef TAYLORX_TRAINING_HPP_
#define TAYLORX_TRAINING_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "taylorx/activation.hpp"
#include "taylorx/datasets.hpp"
#include "taylorx/model.hpp"

namespace taylorx {

// widths = {inputs, hidden..., 1}. Weights ~ N(0, 1/fan_in), zero biases.
Model random_mlp(const std::vector<std::size_t>& widths, Activation hidden,
                 Activation output, std::uint64_t seed);

Model random_tiny_cnn(std::size_t height, std::size_t width,
                      std::size_t channels, Activation activation,
                      std::uint64_t seed);

struct TrainOptions {
  std::size_t epochs = 1500;
  double learning_rate = 0.05;
  // Heavy-ball momentum.
  double momentum = 0.9;
};

struct TrainSummary {
  double initial_loss = 0.0;
  double final_loss = 0.0;
};

// Full-batch gradient descent on mean squared error. Works for MLPs and
// tiny CNNs (shared kernel gradients are accumulated over locations).
TrainSummary train(Model& model, const Dataset& data,
                   const TrainOptions& options);

double mean_squared_error(const Model& model, const Dataset& data);

}  // namespace taylorx

#endif  // TAYLORX_TRAINING_HPP_
