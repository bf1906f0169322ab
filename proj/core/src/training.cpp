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

#include "taylorx/training.hpp"

#include <array>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "taylorx/error.hpp"
#include "taylorx/random.hpp"

namespace taylorx {
namespace {

// Training treats the relu kink as having slope zero.
double train_derivative(const Activation& a, double t) {
  if (a.is_piecewise() && t == 0.0) return 0.0;
  return a.derivative(t);
}

struct LayerGrad {
  Matrix weights;
  Vector bias;
};

double accumulate(const std::vector<DenseLayer>& layers, const Dataset& data,
                  std::vector<LayerGrad>& grads) {
  for (std::size_t l = 0; l < layers.size(); ++l) {
    grads[l].weights = Matrix(layers[l].outputs(), layers[l].inputs());
    grads[l].bias.assign(layers[l].outputs(), 0.0);
  }
  const double scale = 1.0 / static_cast<double>(data.inputs.size());
  double loss = 0.0;
  for (std::size_t s = 0; s < data.inputs.size(); ++s) {
    ForwardTrace t = forward(layers, data.inputs[s]);
    const double err = t.output() - data.targets[s];
    loss += err * err * scale;
    Vector delta = {2.0 * err * scale};
    for (std::size_t l = layers.size(); l-- > 0;) {
      const DenseLayer& layer = layers[l];
      for (std::size_t j = 0; j < layer.outputs(); ++j) {
        delta[j] *= train_derivative(layer.activation, t.preactivations[l][j]);
      }
      Vector prev(layer.inputs(), 0.0);
      const Vector& in = t.activations[l];
      for (std::size_t j = 0; j < layer.outputs(); ++j) {
        if (delta[j] == 0.0) continue;
        grads[l].bias[j] += delta[j];
        for (std::size_t i = 0; i < layer.inputs(); ++i) {
          if (layer.weights(j, i) == 0.0 && in[i] == 0.0) continue;
          grads[l].weights(j, i) += delta[j] * in[i];
          prev[i] += layer.weights(j, i) * delta[j];
        }
      }
      delta = std::move(prev);
    }
  }
  return loss;
}

}  // namespace

Model random_mlp(const std::vector<std::size_t>& widths, Activation hidden,
                 Activation output, std::uint64_t seed) {
  if (widths.size() < 2 || widths.back() != 1) {
    throw DimensionError("mlp widths must run from the input size to 1");
  }
  auto engine = make_engine(seed, "random_mlp");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<DenseLayer> layers;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    DenseLayer layer;
    layer.weights = Matrix(widths[l + 1], widths[l]);
    const double sd = 1.0 / std::sqrt(static_cast<double>(widths[l]));
    for (double& w : layer.weights.data) w = sd * normal(engine);
    layer.bias.resize(widths[l + 1]);
    for (double& b : layer.bias) b = 0.1 * normal(engine);
    layer.activation = l + 2 == widths.size() ? output : hidden;
    layers.push_back(std::move(layer));
  }
  return Model::mlp(std::move(layers));
}

Model random_tiny_cnn(std::size_t height, std::size_t width,
                      std::size_t channels, Activation activation,
                      std::uint64_t seed) {
  auto engine = make_engine(seed, "random_tiny_cnn");
  std::normal_distribution<double> normal(0.0, 1.0);
  ConvNetSpec s;
  s.height = height;
  s.width = width;
  s.channels = channels;
  s.activation = activation;
  s.kernels.resize(channels);
  for (auto& k : s.kernels) {
    for (double& w : k) w = normal(engine) / 3.0;
  }
  s.conv_bias.resize(channels);
  for (double& b : s.conv_bias) b = 0.1 * normal(engine);
  s.head_weights.resize(channels);
  for (double& v : s.head_weights) v = normal(engine);
  s.head_bias = 0.0;
  return Model::tiny_cnn(std::move(s));
}

double mean_squared_error(const Model& model, const Dataset& data) {
  if (data.inputs.empty()) return 0.0;
  double loss = 0.0;
  for (std::size_t s = 0; s < data.inputs.size(); ++s) {
    const double e = model.evaluate(data.inputs[s]) - data.targets[s];
    loss += e * e;
  }
  return loss / static_cast<double>(data.inputs.size());
}

TrainSummary train(Model& model, const Dataset& data,
                   const TrainOptions& options) {
  if (!model.has_layers()) throw UnsupportedError("only networks are trained");
  if (data.inputs.size() != data.targets.size() || data.inputs.empty()) {
    throw DimensionError("training data needs one target per input");
  }
  TrainSummary summary;
  summary.initial_loss = mean_squared_error(model, data);
  std::vector<DenseLayer> layers = model.layers();
  std::vector<LayerGrad> grads(layers.size());
  const bool cnn = model.kind() == ModelKind::kTinyCnn;
  ConvNetSpec spec;
  if (cnn) spec = model.conv();
  // Velocity over the free parameters.
  std::vector<double> velocity;
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    accumulate(layers, data, grads);
    std::vector<double> g;
    if (!cnn) {
      for (const LayerGrad& lg : grads) {
        g.insert(g.end(), lg.weights.data.begin(), lg.weights.data.end());
        g.insert(g.end(), lg.bias.begin(), lg.bias.end());
      }
    } else {
      // Fold dense-layer gradients back onto the shared parameters.
      const std::size_t hw = spec.height * spec.width;
      for (std::size_t k = 0; k < spec.channels; ++k) {
        std::array<double, 9> kg{};
        double bg = 0.0;
        for (std::size_t r = 0; r < spec.height; ++r) {
          for (std::size_t c = 0; c < spec.width; ++c) {
            const std::size_t unit = k * hw + r * spec.width + c;
            bg += grads[0].bias[unit];
            for (int ky = 0; ky < 3; ++ky) {
              for (int kx = 0; kx < 3; ++kx) {
                long rr = static_cast<long>(r) + ky - 1;
                long cc = static_cast<long>(c) + kx - 1;
                if (rr < 0 || cc < 0 || rr >= static_cast<long>(spec.height) ||
                    cc >= static_cast<long>(spec.width)) {
                  continue;
                }
                kg[ky * 3 + kx] += grads[0].weights(unit, rr * spec.width + cc);
              }
            }
          }
        }
        g.insert(g.end(), kg.begin(), kg.end());
        g.push_back(bg);
        double vg = 0.0;
        for (std::size_t p = 0; p < hw; ++p) {
          vg += grads[1].weights(0, k * hw + p) / static_cast<double>(hw);
        }
        g.push_back(vg);
      }
      g.push_back(grads[1].bias[0]);
    }
    if (velocity.empty()) velocity.assign(g.size(), 0.0);
    for (std::size_t p = 0; p < g.size(); ++p) {
      velocity[p] = options.momentum * velocity[p] - options.learning_rate * g[p];
    }
    std::size_t p = 0;
    if (!cnn) {
      for (DenseLayer& layer : layers) {
        for (double& w : layer.weights.data) w += velocity[p++];
        for (double& b : layer.bias) b += velocity[p++];
      }
    } else {
      for (std::size_t k = 0; k < spec.channels; ++k) {
        for (double& w : spec.kernels[k]) w += velocity[p++];
        spec.conv_bias[k] += velocity[p++];
        spec.head_weights[k] += velocity[p++];
      }
      spec.head_bias += velocity[p++];
      layers = lower_conv(spec);
    }
  }
  if (cnn) {
    model.set_conv(spec);
  } else {
    model.set_layers(layers);
  }
  summary.final_loss = mean_squared_error(model, data);
  return summary;
}

}  // namespace taylorx
