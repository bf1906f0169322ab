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

#ifndef TAYLORX_BACKPROP_HPP_
#define TAYLORX_BACKPROP_HPP_

#include <cstddef>
#include <optional>
#include <vector>

#include "taylorx/attribution.hpp"
#include "taylorx/model.hpp"
#include "taylorx/types.hpp"

namespace taylorx {

struct BackpropOptions {
  double epsilon = 1e-9;
  double alpha = 1.0;
  double beta = 0.0;
  double denominator_floor = 1e-12;
  // Fan-in limit for exact per-unit Shapley values in Deep SHAP.
  std::size_t enumeration_limit = 14;
  // Output relevance. Defaults to f(x) for the LRP rules and f(x) - f(ref)
  // for the DeepLIFT rules.
  std::optional<double> output_relevance;
};

// Ratios r(i, j) such that unit j sends r(i, j) * relevance_j to input i.
struct ModuleShares {
  Matrix ratios;
  std::vector<GuardEvent> guards;
};

// Share ratios for one layer. `input` and `reference_input` are the layer's
// inputs for the sample and the reference; the LRP rules ignore the
// reference.
ModuleShares module_shares(MethodId rule, const DenseLayer& layer,
                           ConstVec input, ConstVec reference_input,
                           const BackpropOptions& options,
                           std::size_t layer_index = 0);

// Full pass over the model's dense layers. `reference` is used only by the
// DeepLIFT rules. Every layer's relevance is retained in result.layers.
AttributionResult backpropagate(MethodId rule, const Model& model, ConstVec x,
                                ConstVec reference,
                                const BackpropOptions& options = {});

AttributionResult lrp_epsilon(const Model& model, ConstVec x,
                              double epsilon = 1e-9);
AttributionResult lrp_alpha_beta(const Model& model, ConstVec x, double alpha,
                                 double beta);
AttributionResult deep_taylor(const Model& model, ConstVec x);
AttributionResult deeplift_rescale(const Model& model, ConstVec x,
                                   ConstVec reference);
AttributionResult deep_shap(const Model& model, ConstVec x, ConstVec reference,
                            std::size_t enumeration_limit = 14);
AttributionResult deeplift_revealcancel(const Model& model, ConstVec x,
                                        ConstVec reference);

}  // namespace taylorx

#endif  // TAYLORX_BACKPROP_HPP_
