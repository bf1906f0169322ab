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

#ifndef TAYLORX_ATTRIBUTION_HPP_
#define TAYLORX_ATTRIBUTION_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "taylorx/model.hpp"
#include "taylorx/types.hpp"

namespace taylorx {

enum class MethodId {
  kGradInput,
  kOcclusion1,
  kOcclusionPatch,
  kPredictionDifference,
  kGradCam,
  kIntegratedGradients,
  kExpectedGradients,
  kShapley,
  kLrpEpsilon,
  kLrpAlphaBeta,
  kDeepTaylor,
  kDeepLiftRescale,
  kDeepShap,
  kDeepLiftRevealCancel,
};

// All fourteen methods in a fixed reporting order.
const std::vector<MethodId>& all_methods();
std::string method_name(MethodId id);
// Accepts method_name() spellings plus "shapley_exact". Raises Error.
MethodId parse_method(std::string_view name);
// Methods that propagate relevance layer by layer.
bool is_backprop(MethodId id);

enum class Quadrature { kMidpoint, kLeft, kRight };
std::string to_string(Quadrature q);
Quadrature parse_quadrature(std::string_view name);

// Disjoint variable groups covering 0..n-1.
using Partition = std::vector<VarSet>;
// Raises DimensionError unless the groups are disjoint and cover 0..n-1.
void validate_partition(const Partition& p, std::size_t n);
// Row-major grid cut into ph x pw tiles (edge tiles may be smaller).
Partition grid_patches(std::size_t rows, std::size_t cols, std::size_t ph,
                       std::size_t pw);
// 0..n-1 cut into consecutive windows of `width`.
Partition window_patches(std::size_t n, std::size_t width);

struct MethodConfig {
  std::size_t steps = 300;
  Quadrature quadrature = Quadrature::kMidpoint;
  // Monte Carlo draws for prediction difference and expected gradients.
  std::size_t samples = 16;
  double sigma = 0.1;
  std::uint64_t seed = 0;
  // Occlusion-patch groups. Empty means windows of width 2.
  Partition patches;
  double epsilon = 1e-9;
  double alpha = 1.0;
  double beta = 0.0;
  // A share whose denominator magnitude is below this is set to zero and a
  // guard event is recorded.
  double denominator_floor = 1e-12;
  std::size_t enumeration_limit = 14;
  bool keep_layers = false;
};

// The reference a result was computed against.
struct BaselineRecord {
  std::string origin;
  Vector values;
  // Per-draw baselines for sampling methods.
  std::vector<Vector> draws;
  std::uint64_t seed = 0;
};

// A division guarded by MethodConfig::denominator_floor.
struct GuardEvent {
  std::size_t layer = 0;
  std::size_t unit = 0;
  std::string rule;
  double denominator = 0.0;
};

// Relevance at every layer of a back-propagation pass. relevance[0] is the
// input attribution; shares[l](i, j) is the part of unit j of layer l sent
// to input i of that layer.
struct LayerRelevance {
  std::vector<Vector> relevance;
  std::vector<Matrix> shares;
};

struct AttributionResult {
  MethodId method = MethodId::kGradInput;
  Vector values;
  BaselineRecord baseline;
  std::vector<std::pair<std::string, std::string>> settings;
  std::optional<LayerRelevance> layers;
  std::vector<GuardEvent> guards;
  // Grad-CAM only: unrectified map sum_k alpha_k A^k.
  Vector pre_relu;
};

AttributionResult grad_input(const Model& model, ConstVec x);
AttributionResult occlusion_1(const Model& model, ConstVec x,
                              ConstVec baseline);
AttributionResult occlusion_patch(const Model& model, ConstVec x,
                                  ConstVec baseline, const Partition& patches);
// b ~ N(mean, sigma^2) as a scalar broadcast to every input;
// a_i = E_b[f(x) - f(x with x_i := b)]. sigma == 0 gives the point mass.
AttributionResult prediction_difference(const Model& model, ConstVec x,
                                        double mean, double sigma,
                                        std::size_t samples,
                                        std::uint64_t seed);
AttributionResult integrated_gradients(const Model& model, ConstVec x,
                                       ConstVec baseline, std::size_t steps,
                                       Quadrature rule);
// Integrated gradients averaged over baselines b ~ N(center, sigma^2 I).
AttributionResult expected_gradients(const Model& model, ConstVec x,
                                     ConstVec center, double sigma,
                                     std::size_t samples, std::size_t steps,
                                     Quadrature rule, std::uint64_t seed);
// Exact enumeration over all 2^n coalitions.
AttributionResult shapley_exact(const Model& model, ConstVec x,
                                ConstVec baseline,
                                std::size_t max_variables = 14);

// Dispatches to the method. For prediction difference the scalar mean is the
// average of `baseline`; for expected gradients `baseline` is the center.
AttributionResult attribute(MethodId method, const Model& model, ConstVec x,
                            ConstVec baseline, const MethodConfig& config);

// Same draws prediction_difference and expected_gradients use.
Vector draw_scalar_baselines(double mean, double sigma, std::size_t samples,
                             std::uint64_t seed);
std::vector<Vector> draw_vector_baselines(ConstVec center, double sigma,
                                          std::size_t samples,
                                          std::uint64_t seed);

// Path nodes for a quadrature rule on [0, 1].
Vector quadrature_nodes(std::size_t steps, Quadrature rule);

}  // namespace taylorx

#endif  // TAYLORX_ATTRIBUTION_HPP_
