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

#include "taylorx/attribution.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "taylorx/backprop.hpp"
#include "taylorx/error.hpp"
#include "taylorx/gradcam.hpp"
#include "taylorx/harsanyi.hpp"
#include "taylorx/random.hpp"

namespace taylorx {
namespace {

struct MethodName {
  MethodId id;
  const char* name;
};

constexpr MethodName kNames[] = {
    {MethodId::kGradInput, "grad_input"},
    {MethodId::kOcclusion1, "occlusion_1"},
    {MethodId::kOcclusionPatch, "occlusion_patch"},
    {MethodId::kPredictionDifference, "prediction_difference"},
    {MethodId::kGradCam, "grad_cam"},
    {MethodId::kIntegratedGradients, "integrated_gradients"},
    {MethodId::kExpectedGradients, "expected_gradients"},
    {MethodId::kShapley, "shapley"},
    {MethodId::kLrpEpsilon, "lrp_epsilon"},
    {MethodId::kLrpAlphaBeta, "lrp_alpha_beta"},
    {MethodId::kDeepTaylor, "deep_taylor"},
    {MethodId::kDeepLiftRescale, "deeplift_rescale"},
    {MethodId::kDeepShap, "deep_shap"},
    {MethodId::kDeepLiftRevealCancel, "deeplift_revealcancel"},
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

AttributionResult make_result(MethodId id, Vector values, std::string origin,
                              ConstVec baseline) {
  AttributionResult r;
  r.method = id;
  r.values = std::move(values);
  r.baseline.origin = std::move(origin);
  r.baseline.values.assign(baseline.begin(), baseline.end());
  return r;
}

}  // namespace

const std::vector<MethodId>& all_methods() {
  static const std::vector<MethodId> methods = [] {
    std::vector<MethodId> m;
    for (const MethodName& n : kNames) m.push_back(n.id);
    return m;
  }();
  return methods;
}

std::string method_name(MethodId id) {
  for (const MethodName& n : kNames) {
    if (n.id == id) return n.name;
  }
  return "unknown";
}

MethodId parse_method(std::string_view name) {
  if (name == "shapley_exact") return MethodId::kShapley;
  for (const MethodName& n : kNames) {
    if (name == n.name) return n.id;
  }
  throw Error("unknown method '" + std::string(name) + "'");
}

bool is_backprop(MethodId id) {
  switch (id) {
    case MethodId::kLrpEpsilon:
    case MethodId::kLrpAlphaBeta:
    case MethodId::kDeepTaylor:
    case MethodId::kDeepLiftRescale:
    case MethodId::kDeepShap:
    case MethodId::kDeepLiftRevealCancel:
      return true;
    default:
      return false;
  }
}

std::string to_string(Quadrature q) {
  switch (q) {
    case Quadrature::kMidpoint:
      return "midpoint";
    case Quadrature::kLeft:
      return "left";
    case Quadrature::kRight:
      return "right";
  }
  return "midpoint";
}

Quadrature parse_quadrature(std::string_view name) {
  if (name == "midpoint") return Quadrature::kMidpoint;
  if (name == "left") return Quadrature::kLeft;
  if (name == "right") return Quadrature::kRight;
  throw Error("unknown quadrature rule '" + std::string(name) + "'");
}

void validate_partition(const Partition& p, std::size_t n) {
  VarSet seen;
  for (const VarSet& g : p) {
    if (g.empty()) throw DimensionError("patch partition has an empty group");
    if (g.intersects(seen)) {
      throw DimensionError("patch partition groups overlap");
    }
    seen = seen | g;
  }
  if (seen != VarSet::full(n)) {
    throw DimensionError("patch partition does not cover every input");
  }
}

Partition grid_patches(std::size_t rows, std::size_t cols, std::size_t ph,
                       std::size_t pw) {
  if (ph == 0 || pw == 0) throw DimensionError("patch size must be positive");
  Partition p;
  for (std::size_t r0 = 0; r0 < rows; r0 += ph) {
    for (std::size_t c0 = 0; c0 < cols; c0 += pw) {
      VarSet g;
      for (std::size_t r = r0; r < std::min(rows, r0 + ph); ++r) {
        for (std::size_t c = c0; c < std::min(cols, c0 + pw); ++c) {
          g = g.with(r * cols + c);
        }
      }
      p.push_back(g);
    }
  }
  return p;
}

Partition window_patches(std::size_t n, std::size_t width) {
  return grid_patches(1, n, 1, width);
}

Vector quadrature_nodes(std::size_t steps, Quadrature rule) {
  if (steps == 0) throw Error("path integration needs at least one step");
  Vector nodes(steps);
  const double m = static_cast<double>(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    switch (rule) {
      case Quadrature::kMidpoint:
        nodes[k] = (static_cast<double>(k) + 0.5) / m;
        break;
      case Quadrature::kLeft:
        nodes[k] = static_cast<double>(k) / m;
        break;
      case Quadrature::kRight:
        nodes[k] = static_cast<double>(k + 1) / m;
        break;
    }
  }
  return nodes;
}

Vector draw_scalar_baselines(double mean, double sigma, std::size_t samples,
                             std::uint64_t seed) {
  if (samples == 0) throw Error("at least one baseline draw is required");
  if (!(sigma >= 0)) throw Error("baseline sigma must be >= 0");
  auto engine = make_engine(seed, "prediction_difference");
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector out(samples);
  for (double& v : out) v = mean + sigma * normal(engine);
  return out;
}

std::vector<Vector> draw_vector_baselines(ConstVec center, double sigma,
                                          std::size_t samples,
                                          std::uint64_t seed) {
  if (samples == 0) throw Error("at least one baseline draw is required");
  if (!(sigma >= 0)) throw Error("baseline sigma must be >= 0");
  auto engine = make_engine(seed, "expected_gradients");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Vector> out(samples, Vector(center.begin(), center.end()));
  for (Vector& b : out) {
    for (double& v : b) v += sigma * normal(engine);
  }
  return out;
}

AttributionResult grad_input(const Model& model, ConstVec x) {
  Vector g = model.gradient(x);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] *= x[i];
  Vector zero(x.size(), 0.0);
  return make_result(MethodId::kGradInput, std::move(g), "zero", zero);
}

AttributionResult occlusion_1(const Model& model, ConstVec x,
                              ConstVec baseline) {
  require_size(baseline, model.num_inputs(), "baseline");
  const double fx = model.evaluate(x);
  Vector a(x.size());
  Vector probe(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = baseline[i];
    a[i] = fx - model.evaluate(probe);
    probe[i] = x[i];
  }
  return make_result(MethodId::kOcclusion1, std::move(a), "fixed", baseline);
}

AttributionResult occlusion_patch(const Model& model, ConstVec x,
                                  ConstVec baseline, const Partition& patches) {
  require_size(baseline, model.num_inputs(), "baseline");
  validate_partition(patches, x.size());
  const double fx = model.evaluate(x);
  Vector a(x.size());
  for (const VarSet& g : patches) {
    Vector probe(x.begin(), x.end());
    for (std::size_t i : g.members()) probe[i] = baseline[i];
    const double d = fx - model.evaluate(probe);
    for (std::size_t i : g.members()) a[i] = d;
  }
  auto r = make_result(MethodId::kOcclusionPatch, std::move(a), "fixed",
                       baseline);
  r.settings.emplace_back("patches", std::to_string(patches.size()));
  return r;
}

AttributionResult prediction_difference(const Model& model, ConstVec x,
                                        double mean, double sigma,
                                        std::size_t samples,
                                        std::uint64_t seed) {
  require_size(x, model.num_inputs(), "input");
  Vector draws = draw_scalar_baselines(mean, sigma, samples, seed);
  const double fx = model.evaluate(x);
  Vector a(x.size(), 0.0);
  Vector probe(x.begin(), x.end());
  for (double b : draws) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      probe[i] = b;
      a[i] += fx - model.evaluate(probe);
      probe[i] = x[i];
    }
  }
  for (double& v : a) v /= static_cast<double>(draws.size());
  Vector center(x.size(), mean);
  auto r = make_result(MethodId::kPredictionDifference, std::move(a),
                       sigma == 0.0 ? "point-mass" : "gaussian-scalar", center);
  for (double b : draws) r.baseline.draws.push_back(Vector(x.size(), b));
  r.baseline.seed = seed;
  r.settings.emplace_back("samples", std::to_string(draws.size()));
  r.settings.emplace_back("sigma", num(sigma));
  return r;
}

AttributionResult integrated_gradients(const Model& model, ConstVec x,
                                       ConstVec baseline, std::size_t steps,
                                       Quadrature rule) {
  require_size(x, model.num_inputs(), "input");
  require_size(baseline, model.num_inputs(), "baseline");
  Vector nodes = quadrature_nodes(steps, rule);
  Vector acc(x.size(), 0.0);
  Vector point(x.size());
  for (double alpha : nodes) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      point[i] = baseline[i] + alpha * (x[i] - baseline[i]);
    }
    Vector g = model.gradient(point);
    for (std::size_t i = 0; i < x.size(); ++i) acc[i] += g[i];
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc[i] = (x[i] - baseline[i]) * acc[i] / static_cast<double>(steps);
  }
  auto r = make_result(MethodId::kIntegratedGradients, std::move(acc), "fixed",
                       baseline);
  r.settings.emplace_back("steps", std::to_string(steps));
  r.settings.emplace_back("quadrature", to_string(rule));
  return r;
}

AttributionResult expected_gradients(const Model& model, ConstVec x,
                                     ConstVec center, double sigma,
                                     std::size_t samples, std::size_t steps,
                                     Quadrature rule, std::uint64_t seed) {
  require_size(center, model.num_inputs(), "baseline center");
  std::vector<Vector> draws = draw_vector_baselines(center, sigma, samples, seed);
  Vector a(x.size(), 0.0);
  for (const Vector& b : draws) {
    Vector ig = integrated_gradients(model, x, b, steps, rule).values;
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += ig[i];
  }
  for (double& v : a) v /= static_cast<double>(draws.size());
  auto r = make_result(MethodId::kExpectedGradients, std::move(a),
                       sigma == 0.0 ? "point-mass" : "gaussian", center);
  r.baseline.draws = std::move(draws);
  r.baseline.seed = seed;
  r.settings.emplace_back("samples", std::to_string(samples));
  r.settings.emplace_back("sigma", num(sigma));
  r.settings.emplace_back("steps", std::to_string(steps));
  r.settings.emplace_back("quadrature", to_string(rule));
  return r;
}

AttributionResult shapley_exact(const Model& model, ConstVec x,
                                ConstVec baseline, std::size_t max_variables) {
  const std::size_t n = model.num_inputs();
  Vector v = coalition_values(model, x, baseline, max_variables);
  // p(S) = |S|! (n - 1 - |S|)! / n! = 1 / (n * C(n - 1, |S|))
  Vector weight(n);
  double binom = 1.0;
  for (std::size_t s = 0; s < n; ++s) {
    weight[s] = 1.0 / (static_cast<double>(n) * binom);
    binom = binom * static_cast<double>(n - 1 - s) / static_cast<double>(s + 1);
  }
  Vector a(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    double sum = 0.0;
    for (std::size_t m = 0; m < v.size(); ++m) {
      if (m & bit) continue;
      sum += weight[std::popcount(m)] * (v[m | bit] - v[m]);
    }
    a[i] = sum;
  }
  auto r = make_result(MethodId::kShapley, std::move(a), "fixed", baseline);
  r.settings.emplace_back("coalitions", std::to_string(v.size()));
  return r;
}

AttributionResult attribute(MethodId method, const Model& model, ConstVec x,
                            ConstVec baseline, const MethodConfig& config) {
  require_size(x, model.num_inputs(), "input");
  require_size(baseline, model.num_inputs(), "baseline");
  BackpropOptions bp;
  bp.epsilon = config.epsilon;
  bp.alpha = config.alpha;
  bp.beta = config.beta;
  bp.denominator_floor = config.denominator_floor;
  bp.enumeration_limit = config.enumeration_limit;
  AttributionResult r;
  switch (method) {
    case MethodId::kGradInput:
      r = grad_input(model, x);
      break;
    case MethodId::kOcclusion1:
      r = occlusion_1(model, x, baseline);
      break;
    case MethodId::kOcclusionPatch:
      r = occlusion_patch(model, x, baseline,
                          config.patches.empty()
                              ? window_patches(x.size(), 2)
                              : config.patches);
      break;
    case MethodId::kPredictionDifference: {
      double mean = 0.0;
      for (double b : baseline) mean += b;
      mean /= static_cast<double>(baseline.size());
      r = prediction_difference(model, x, mean, config.sigma, config.samples,
                                config.seed);
      break;
    }
    case MethodId::kGradCam:
      r = grad_cam(model, x);
      break;
    case MethodId::kIntegratedGradients:
      r = integrated_gradients(model, x, baseline, config.steps,
                               config.quadrature);
      break;
    case MethodId::kExpectedGradients:
      r = expected_gradients(model, x, baseline, config.sigma, config.samples,
                             config.steps, config.quadrature, config.seed);
      break;
    case MethodId::kShapley:
      r = shapley_exact(model, x, baseline, config.enumeration_limit);
      break;
    case MethodId::kLrpEpsilon:
    case MethodId::kLrpAlphaBeta:
    case MethodId::kDeepTaylor:
    case MethodId::kDeepLiftRescale:
    case MethodId::kDeepShap:
    case MethodId::kDeepLiftRevealCancel:
      r = backpropagate(method, model, x, baseline, bp);
      break;
  }
  if (!config.keep_layers) r.layers.reset();
  return r;
}

}  // namespace taylorx
