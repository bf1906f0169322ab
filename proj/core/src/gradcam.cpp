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

#include "taylorx/gradcam.hpp"

#include <string>
#include <utility>
#include <vector>

#include "taylorx/error.hpp"

namespace taylorx {

Vector ConvFeatureStack::pooled() const {
  Vector f(maps.size(), 0.0);
  for (std::size_t k = 0; k < maps.size(); ++k) {
    for (double v : maps[k]) f[k] += v;
    f[k] /= static_cast<double>(height * width);
  }
  return f;
}

double ConvFeatureStack::output() const {
  Vector f = pooled();
  double u = head_bias;
  for (std::size_t k = 0; k < f.size(); ++k) u += head_weights[k] * f[k];
  return head_activation.value(u);
}

std::vector<Vector> ConvFeatureStack::output_gradient() const {
  Vector f = pooled();
  double u = head_bias;
  for (std::size_t k = 0; k < f.size(); ++k) u += head_weights[k] * f[k];
  const double scale =
      head_activation.derivative(u) / static_cast<double>(height * width);
  std::vector<Vector> g(maps.size());
  for (std::size_t k = 0; k < maps.size(); ++k) {
    g[k].assign(maps[k].size(), head_weights[k] * scale);
  }
  return g;
}

ConvFeatureStack conv_features(const Model& model, ConstVec x) {
  const ConvNetSpec& spec = model.conv();
  ForwardTrace t = model.trace(x);
  const std::size_t hw = spec.height * spec.width;
  ConvFeatureStack s;
  s.height = spec.height;
  s.width = spec.width;
  s.maps.resize(spec.channels);
  for (std::size_t k = 0; k < spec.channels; ++k) {
    s.maps[k].assign(t.activations[1].begin() + k * hw,
                     t.activations[1].begin() + (k + 1) * hw);
  }
  s.head_weights = spec.head_weights;
  s.head_bias = spec.head_bias;
  s.head_activation = Activation::identity();
  return s;
}

Vector grad_cam_weights(const ConvFeatureStack& stack) {
  if (stack.head_weights.size() != stack.maps.size()) {
    throw DimensionError("head weights must match the channel count");
  }
  std::vector<Vector> g = stack.output_gradient();
  Vector alpha(g.size(), 0.0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    for (double v : g[k]) alpha[k] += v;
    alpha[k] /= static_cast<double>(stack.height * stack.width);
  }
  return alpha;
}

GradCamMaps grad_cam_unchecked(const ConvFeatureStack& stack) {
  const std::size_t hw = stack.height * stack.width;
  for (const Vector& m : stack.maps) require_size(m, hw, "feature map");
  GradCamMaps out;
  out.alphas = grad_cam_weights(stack);
  out.pre_relu.assign(hw, 0.0);
  out.neuron_maps.resize(stack.maps.size());
  for (std::size_t k = 0; k < stack.maps.size(); ++k) {
    out.neuron_maps[k].resize(hw);
    for (std::size_t p = 0; p < hw; ++p) {
      out.neuron_maps[k][p] = out.alphas[k] * stack.maps[k][p];
      out.pre_relu[p] += out.neuron_maps[k][p];
    }
  }
  out.map.resize(hw);
  for (std::size_t p = 0; p < hw; ++p) {
    out.map[p] = out.pre_relu[p] > 0 ? out.pre_relu[p] : 0.0;
  }
  return out;
}

GradCamMaps grad_cam(const ConvFeatureStack& stack) {
  if (stack.head_activation.kind != ActivationKind::kIdentity) {
    throw UnsupportedError(
        "grad_cam needs a linear head above the feature maps; got " +
        stack.head_activation.name());
  }
  return grad_cam_unchecked(stack);
}

AttributionResult grad_cam(const Model& model, ConstVec x) {
  if (model.kind() != ModelKind::kTinyCnn) {
    throw UnsupportedError("grad_cam needs a tiny-cnn model");
  }
  GradCamMaps maps = grad_cam(conv_features(model, x));
  AttributionResult r;
  r.method = MethodId::kGradCam;
  r.values = std::move(maps.map);
  r.pre_relu = std::move(maps.pre_relu);
  r.baseline.origin = "zero";
  r.baseline.values.assign(x.size(), 0.0);
  r.settings.emplace_back("channels", std::to_string(maps.alphas.size()));
  return r;
}

}  // namespace taylorx
