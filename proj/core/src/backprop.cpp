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

#include "taylorx/backprop.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "taylorx/error.hpp"

namespace taylorx {
namespace {

bool uses_reference(MethodId rule) {
  return rule == MethodId::kDeepLiftRescale || rule == MethodId::kDeepShap ||
         rule == MethodId::kDeepLiftRevealCancel;
}

void guard(ModuleShares& out, std::size_t layer, std::size_t unit,
           MethodId rule, double denominator) {
  out.guards.push_back({layer, unit, method_name(rule), denominator});
}

// Shapley values of the players of v(T) = act(base + sum_{i in T} d_i).
Vector unit_shapley(const Activation& act, double base, const Vector& d,
                    std::size_t limit) {
  const std::size_t n = d.size();
  Vector phi(n, 0.0);
  if (act.kind == ActivationKind::kIdentity) {
    return d;  // additive game
  }
  std::vector<std::size_t> players;
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] != 0.0) players.push_back(i);
  }
  const std::size_t p = players.size();
  if (p == 0) return phi;
  if (p > limit || p >= 63) {
    throw BudgetError("unit with " + std::to_string(p) +
                      " active inputs exceeds the Shapley fan-in limit " +
                      std::to_string(limit));
  }
  const std::size_t count = std::size_t{1} << p;
  Vector sums(count, 0.0);
  Vector value(count);
  value[0] = act.value(base);
  for (std::size_t m = 1; m < count; ++m) {
    const std::size_t low = static_cast<std::size_t>(std::countr_zero(m));
    sums[m] = sums[m & (m - 1)] + d[players[low]];
    value[m] = act.value(base + sums[m]);
  }
  Vector weight(p);
  double binom = 1.0;
  for (std::size_t s = 0; s < p; ++s) {
    weight[s] = 1.0 / (static_cast<double>(p) * binom);
    binom = binom * static_cast<double>(p - 1 - s) / static_cast<double>(s + 1);
  }
  for (std::size_t k = 0; k < p; ++k) {
    const std::size_t bit = std::size_t{1} << k;
    double sum = 0.0;
    for (std::size_t m = 0; m < count; ++m) {
      if (m & bit) continue;
      sum += weight[std::popcount(m)] * (value[m | bit] - value[m]);
    }
    phi[players[k]] = sum;
  }
  return phi;
}

}  // namespace

ModuleShares module_shares(MethodId rule, const DenseLayer& layer,
                           ConstVec input, ConstVec reference_input,
                           const BackpropOptions& o, std::size_t layer_index) {
  if (!is_backprop(rule)) {
    throw UnsupportedError(method_name(rule) +
                           " is not a back-propagation rule");
  }
  require_size(input, layer.inputs(), "layer input");
  if (uses_reference(rule)) {
    require_size(reference_input, layer.inputs(), "reference layer input");
  }
  const std::size_t nin = layer.inputs();
  ModuleShares out;
  out.ratios = Matrix(nin, layer.outputs());
  Vector z(nin);
  for (std::size_t j = 0; j < layer.outputs(); ++j) {
    switch (rule) {
      case MethodId::kLrpEpsilon: {
        double h = layer.bias[j];
        for (std::size_t i = 0; i < nin; ++i) {
          z[i] = layer.weights(j, i) * input[i];
          h += z[i];
        }
        const double den = h >= 0 ? h + o.epsilon : h - o.epsilon;
        if (std::abs(den) < o.denominator_floor) {
          guard(out, layer_index, j, rule, den);
          break;
        }
        for (std::size_t i = 0; i < nin; ++i) out.ratios(i, j) = z[i] / den;
        break;
      }
      case MethodId::kLrpAlphaBeta: {
        double pos = 0.0;
        double neg = 0.0;
        bool has_neg = false;
        for (std::size_t i = 0; i < nin; ++i) {
          z[i] = layer.weights(j, i) * input[i];
          if (z[i] > 0) {
            pos += z[i];
          } else {
            neg += z[i];
            has_neg = true;
          }
        }
        if (pos > 0 && pos < o.denominator_floor) {
          guard(out, layer_index, j, rule, pos);
        } else if (pos > 0) {
          for (std::size_t i = 0; i < nin; ++i) {
            if (z[i] > 0) out.ratios(i, j) = (o.alpha * z[i]) / pos;
          }
        }
        if (o.beta != 0.0 && has_neg) {
          if (std::abs(neg) < o.denominator_floor) {
            guard(out, layer_index, j, rule, neg);
          } else {
            for (std::size_t i = 0; i < nin; ++i) {
              if (!(z[i] > 0)) out.ratios(i, j) = (o.beta * z[i]) / neg;
            }
          }
        }
        break;
      }
      case MethodId::kDeepTaylor: {
        double pos = 0.0;
        for (std::size_t i = 0; i < nin; ++i) {
          z[i] = layer.weights(j, i) * input[i];
          if (z[i] > 0) pos += z[i];
        }
        if (pos > 0 && pos < o.denominator_floor) {
          guard(out, layer_index, j, rule, pos);
        } else if (pos > 0) {
          for (std::size_t i = 0; i < nin; ++i) {
            if (z[i] > 0) out.ratios(i, j) = (1.0 * z[i]) / pos;
          }
        }
        break;
      }
      case MethodId::kDeepLiftRescale: {
        double total = 0.0;
        for (std::size_t i = 0; i < nin; ++i) {
          z[i] = layer.weights(j, i) * (input[i] - reference_input[i]);
          total += z[i];
        }
        if (std::abs(total) < o.denominator_floor) {
          guard(out, layer_index, j, rule, total);
          break;
        }
        for (std::size_t i = 0; i < nin; ++i) out.ratios(i, j) = z[i] / total;
        break;
      }
      case MethodId::kDeepShap: {
        double base = layer.bias[j];
        for (std::size_t i = 0; i < nin; ++i) {
          z[i] = layer.weights(j, i) * (input[i] - reference_input[i]);
          base += layer.weights(j, i) * reference_input[i];
        }
        Vector phi =
            unit_shapley(layer.activation, base, z, o.enumeration_limit);
        double total = 0.0;
        for (double v : phi) total += v;
        if (std::abs(total) < o.denominator_floor) {
          guard(out, layer_index, j, rule, total);
          break;
        }
        for (std::size_t i = 0; i < nin; ++i) out.ratios(i, j) = phi[i] / total;
        break;
      }
      case MethodId::kDeepLiftRevealCancel: {
        double base = layer.bias[j];
        double dpos = 0.0;
        double dneg = 0.0;
        for (std::size_t i = 0; i < nin; ++i) {
          z[i] = layer.weights(j, i) * (input[i] - reference_input[i]);
          base += layer.weights(j, i) * reference_input[i];
          if (z[i] > 0) {
            dpos += z[i];
          } else {
            dneg += z[i];
          }
        }
        const Activation& act = layer.activation;
        // Two-player Shapley split between the positive and negative groups.
        // An empty group contributes no change and receives zero.
        double ypos = 0.0;
        double yneg = 0.0;
        if (dpos != 0.0) {
          ypos = 0.5 * (act.value(base + dpos) - act.value(base)) +
                 0.5 * (act.value(base + dpos + dneg) - act.value(base + dneg));
        }
        if (dneg != 0.0) {
          yneg = 0.5 * (act.value(base + dneg) - act.value(base)) +
                 0.5 * (act.value(base + dpos + dneg) - act.value(base + dpos));
        }
        const double total = ypos + yneg;
        if (std::abs(total) < o.denominator_floor) {
          guard(out, layer_index, j, rule, total);
          break;
        }
        for (std::size_t i = 0; i < nin; ++i) {
          if (z[i] > 0) {
            out.ratios(i, j) = z[i] / dpos * (ypos / total);
          } else if (z[i] < 0) {
            out.ratios(i, j) = z[i] / dneg * (yneg / total);
          }
        }
        break;
      }
      default:
        break;
    }
  }
  return out;
}

AttributionResult backpropagate(MethodId rule, const Model& model, ConstVec x,
                                ConstVec reference,
                                const BackpropOptions& options) {
  if (!is_backprop(rule)) {
    throw UnsupportedError(method_name(rule) +
                           " is not a back-propagation rule");
  }
  if (!model.has_layers()) {
    throw UnsupportedError(method_name(rule) +
                           " needs a layered model (mlp or tiny-cnn)");
  }
  const auto& layers = model.layers();
  const bool ref = uses_reference(rule);
  ForwardTrace t = model.trace(x);
  ForwardTrace tr;
  if (ref) {
    tr = model.trace(reference);
  }
  double init = options.output_relevance.has_value()
                    ? *options.output_relevance
                    : (ref ? t.output() - tr.output() : t.output());

  AttributionResult result;
  result.method = rule;
  LayerRelevance lr;
  lr.relevance.resize(layers.size() + 1);
  lr.shares.resize(layers.size());
  lr.relevance[layers.size()] = {init};
  for (std::size_t l = layers.size(); l-- > 0;) {
    const Vector& upper = lr.relevance[l + 1];
    const Vector empty;
    ConstVec ref_in = ref ? ConstVec(tr.activations[l]) : ConstVec(empty);
    ModuleShares s =
        module_shares(rule, layers[l], t.activations[l], ref_in, options, l);
    Vector lower(layers[l].inputs(), 0.0);
    Matrix shares(layers[l].inputs(), layers[l].outputs());
    for (std::size_t i = 0; i < layers[l].inputs(); ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < layers[l].outputs(); ++j) {
        const double v = s.ratios(i, j) * upper[j];
        shares(i, j) = v;
        sum += v;
      }
      lower[i] = sum;
    }
    lr.relevance[l] = std::move(lower);
    lr.shares[l] = std::move(shares);
    result.guards.insert(result.guards.end(), s.guards.begin(), s.guards.end());
  }
  result.values = lr.relevance[0];
  result.layers = std::move(lr);
  result.baseline.origin = ref ? "reference" : "zero";
  result.baseline.values = ref ? Vector(reference.begin(), reference.end())
                               : Vector(x.size(), 0.0);
  result.settings.emplace_back("output_relevance", std::to_string(init));
  if (rule == MethodId::kLrpEpsilon) {
    result.settings.emplace_back("epsilon", std::to_string(options.epsilon));
  }
  if (rule == MethodId::kLrpAlphaBeta) {
    result.settings.emplace_back("alpha", std::to_string(options.alpha));
    result.settings.emplace_back("beta", std::to_string(options.beta));
  }
  return result;
}

AttributionResult lrp_epsilon(const Model& model, ConstVec x, double epsilon) {
  BackpropOptions o;
  o.epsilon = epsilon;
  return backpropagate(MethodId::kLrpEpsilon, model, x, {}, o);
}

AttributionResult lrp_alpha_beta(const Model& model, ConstVec x, double alpha,
                                 double beta) {
  BackpropOptions o;
  o.alpha = alpha;
  o.beta = beta;
  return backpropagate(MethodId::kLrpAlphaBeta, model, x, {}, o);
}

AttributionResult deep_taylor(const Model& model, ConstVec x) {
  return backpropagate(MethodId::kDeepTaylor, model, x, {}, {});
}

AttributionResult deeplift_rescale(const Model& model, ConstVec x,
                                   ConstVec reference) {
  return backpropagate(MethodId::kDeepLiftRescale, model, x, reference, {});
}

AttributionResult deep_shap(const Model& model, ConstVec x, ConstVec reference,
                            std::size_t enumeration_limit) {
  BackpropOptions o;
  o.enumeration_limit = enumeration_limit;
  return backpropagate(MethodId::kDeepShap, model, x, reference, o);
}

AttributionResult deeplift_revealcancel(const Model& model, ConstVec x,
                                        ConstVec reference) {
  return backpropagate(MethodId::kDeepLiftRevealCancel, model, x, reference,
                       {});
}

}  // namespace taylorx
