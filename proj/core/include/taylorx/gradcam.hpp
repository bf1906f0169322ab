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

#ifndef TAYLORX_GRADCAM_HPP_
#define TAYLORX_GRADCAM_HPP_

#include <cstddef>
#include <vector>

#include "taylorx/activation.hpp"
#include "taylorx/attribution.hpp"
#include "taylorx/model.hpp"
#include "taylorx/types.hpp"

namespace taylorx {

// Feature maps A^k of a convolutional layer followed by a pooled head
// y = act(sum_k v_k F^k + c) with F^k the spatial mean of A^k.
struct ConvFeatureStack {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<Vector> maps;  // [channel][row * width + col]
  Vector head_weights;
  double head_bias = 0.0;
  Activation head_activation = Activation::identity();

  std::size_t channels() const { return maps.size(); }
  Vector pooled() const;
  double output() const;
  // dy/dA^k_ij for every channel and location.
  std::vector<Vector> output_gradient() const;
};

// Feature maps of a tiny CNN at input x.
ConvFeatureStack conv_features(const Model& tiny_cnn, ConstVec x);

struct GradCamMaps {
  Vector alphas;                    // alpha_k
  std::vector<Vector> neuron_maps;  // alpha_k A^k_ij
  Vector pre_relu;                  // sum_k alpha_k A^k_ij
  Vector map;                       // ReLU of pre_relu
};

// Channel weights alpha_k = mean over locations of dy/dA^k_ij.
Vector grad_cam_weights(const ConvFeatureStack& stack);
// Requires an identity head, where the head is exactly its own first-order
// expansion; raises UnsupportedError otherwise.
GradCamMaps grad_cam(const ConvFeatureStack& stack);
// Same arithmetic without the head check.
GradCamMaps grad_cam_unchecked(const ConvFeatureStack& stack);

AttributionResult grad_cam(const Model& tiny_cnn, ConstVec x);

}  // namespace taylorx

#endif  // TAYLORX_GRADCAM_HPP_
