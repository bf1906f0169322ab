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

#include "taylorx/unification.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "taylorx/backprop.hpp"
#include "taylorx/error.hpp"
#include "taylorx/gradcam.hpp"
#include "taylorx/harsanyi.hpp"
#include "taylorx/parallel.hpp"
#include "taylorx/random.hpp"

namespace taylorx {
namespace {

double norm(ConstVec v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double relative_gap(ConstVec a, ConstVec ref) {
  Vector d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - ref[i];
  return norm(d) / std::max(norm(ref), 1e-12);
}

double group_sum(ConstVec z, VarSet group, bool inside) {
  double s = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (group.contains(i) == inside) s += z[i];
  }
  return s;
}

}  // namespace

bool AllocationSchema::needs_patches() const {
  return method_ == MethodId::kOcclusionPatch;
}

bool AllocationSchema::needs_groups() const {
  return method_ == MethodId::kLrpAlphaBeta ||
         method_ == MethodId::kDeepTaylor ||
         method_ == MethodId::kDeepLiftRevealCancel;
}

AllocationSchema schema_for(MethodId method) {
  AllocationSchema s;
  s.method_ = method;
  switch (method) {
    case MethodId::kGradInput:
    case MethodId::kLrpEpsilon:
    case MethodId::kGradCam:
      s.anchor_ = Anchor::kSample;
      s.rule_ = "first-order term of variable i only";
      break;
    case MethodId::kOcclusion1:
    case MethodId::kPredictionDifference:
      s.rule_ = "every term involving variable i, in full";
      break;
    case MethodId::kOcclusionPatch:
      s.rule_ = "every term touching the patch of variable i, in full";
      break;
    case MethodId::kIntegratedGradients:
    case MethodId::kExpectedGradients:
    case MethodId::kDeepLiftRescale:
      s.rule_ = "kappa_i / sum(kappa) of each term involving variable i";
      break;
    case MethodId::kShapley:
    case MethodId::kDeepShap:
      s.rule_ = "1 / |S_kappa| of each term involving variable i";
      break;
    case MethodId::kLrpAlphaBeta:
      s.rule_ =
          "alpha (beta) times kappa_i over the group order for terms touching "
          "the variable's group; alpha (beta) z_i / sum z for terms confined "
          "to the other group";
      break;
    case MethodId::kDeepTaylor:
      s.rule_ =
          "kappa_i over the positive-group order for terms touching N+; "
          "z_i / sum z for terms confined to N-; nothing to N-";
      break;
    case MethodId::kDeepLiftRevealCancel:
      s.rule_ =
          "kappa_i over the group order for terms inside the group; half of "
          "that for terms spanning both groups";
      break;
  }
  return s;
}

double AllocationSchema::weight(std::size_t i, const DegreeVector& kappa,
                                const SchemaContext& ctx) const {
  const VarSet field = kappa.receptive_field();
  const bool involved = field.contains(i);
  switch (method_) {
    case MethodId::kGradInput:
    case MethodId::kLrpEpsilon:
    case MethodId::kGradCam:
      return kappa.is_unit(i) ? 1.0 : 0.0;
    case MethodId::kOcclusion1:
    case MethodId::kPredictionDifference:
      return involved ? 1.0 : 0.0;
    case MethodId::kOcclusionPatch: {
      if (ctx.patches.empty()) {
        throw Error("occlusion_patch schema needs a patch partition");
      }
      for (const VarSet& g : ctx.patches) {
        if (g.contains(i)) return field.intersects(g) ? 1.0 : 0.0;
      }
      throw DimensionError("variable " + std::to_string(i) +
                           " is in no patch");
    }
    case MethodId::kIntegratedGradients:
    case MethodId::kExpectedGradients:
    case MethodId::kDeepLiftRescale:
      return static_cast<double>(kappa.exponent(i)) / kappa.order();
    case MethodId::kShapley:
    case MethodId::kDeepShap:
      return involved ? 1.0 / static_cast<double>(field.size()) : 0.0;
    case MethodId::kLrpAlphaBeta:
    case MethodId::kDeepTaylor: {
      const double alpha =
          method_ == MethodId::kDeepTaylor ? 1.0 : ctx.alpha;
      const double beta = method_ == MethodId::kDeepTaylor ? 0.0 : ctx.beta;
      if (ctx.z.size() <= i) {
        throw Error("alpha-beta schema needs z for every variable");
      }
      const VarSet pos = ctx.positive;
      const VarSet neg(~pos.mask());
      const bool in_pos = pos.contains(i);
      const VarSet own = in_pos ? pos : neg;
      const double scale = in_pos ? alpha : beta;
      if (scale == 0.0) return 0.0;
      const int own_order = kappa.order_within(own);
      if (own_order > 0) {
        return scale * kappa.exponent(i) / static_cast<double>(own_order);
      }
      const double zsum = group_sum(ctx.z, pos, in_pos);
      return zsum == 0.0 ? 0.0 : scale * ctx.z[i] / zsum;
    }
    case MethodId::kDeepLiftRevealCancel: {
      if (kappa.exponent(i) == 0) return 0.0;
      const VarSet pos = ctx.positive;
      const VarSet neg(~pos.mask());
      const VarSet own = pos.contains(i) ? pos : neg;
      const VarSet other = pos.contains(i) ? neg : pos;
      const double c = static_cast<double>(kappa.exponent(i)) /
                       kappa.order_within(own);
      return field.intersects(other) ? 0.5 * c : c;
    }
  }
  return 0.0;
}

Vector reconstruct(const AllocationSchema& schema,
                   const TaylorDecomposition& d, const SchemaContext& ctx) {
  const std::size_t n = d.num_variables();
  if (schema.needs_patches()) validate_partition(ctx.patches, n);
  Vector a(n, 0.0);
  for (const TaylorTerm& t : d.terms()) {
    if (t.value == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const double w = schema.weight(i, t.kappa, ctx);
      if (w != 0.0) a[i] += w * t.value;
    }
  }
  if (schema.anchor() == Anchor::kSample) {
    for (double& v : a) v = -v;
  }
  return a;
}

SchemaContext unit_context(MethodId method, const DenseLayer& unit, ConstVec x,
                           ConstVec reference, double alpha, double beta) {
  if (unit.outputs() != 1) throw DimensionError("unit context needs one unit");
  require_size(x, unit.inputs(), "unit input");
  SchemaContext ctx;
  ctx.alpha = alpha;
  ctx.beta = beta;
  ctx.z.resize(unit.inputs());
  const bool delta = method == MethodId::kDeepLiftRevealCancel;
  if (delta) require_size(reference, unit.inputs(), "unit reference");
  for (std::size_t i = 0; i < unit.inputs(); ++i) {
    ctx.z[i] = unit.weights(0, i) * (delta ? x[i] - reference[i] : x[i]);
    if (ctx.z[i] > 0) ctx.positive = ctx.positive.with(i);
  }
  return ctx;
}

Vector fit_baseline(ConstVec x, const FitOptions& options, std::size_t index) {
  auto engine = make_engine(options.seed, "fit_baseline", index);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector b(x.begin(), x.end());
  for (double& v : b) v += options.baseline_sigma * normal(engine);
  return b;
}

FitReport fitting_error(MethodId method, const Model& model,
                        const std::vector<Vector>& samples,
                        const FitOptions& options) {
  if (is_backprop(method) || method == MethodId::kGradCam) {
    throw UnsupportedError(
        "fitting error is defined for perturbation and gradient methods; " +
        method_name(method) + " is only reconstructed per module");
  }
  if (samples.empty()) throw Error("fitting error needs samples");
  const AllocationSchema schema = schema_for(method);
  const std::size_t n = model.num_inputs();
  SchemaContext ctx;
  ctx.patches = options.method.patches.empty() ? window_patches(n, 2)
                                               : options.method.patches;
  Vector errors(samples.size(), -1.0);
  parallel_for(samples.size(), [&](std::size_t s) {
    const Vector& x = samples[s];
    require_size(x, n, "sample");
    const Vector b = fit_baseline(x, options, s);
    MethodConfig cfg = options.method;
    cfg.patches = ctx.patches;
    cfg.seed = substream_seed(options.seed, "fit_method", s);
    const AttributionResult actual = attribute(method, model, x, b, cfg);
    Vector recon(n, 0.0);
    if (schema.anchor() == Anchor::kSample) {
      const Vector zero(n, 0.0);
      recon = reconstruct(schema, expand(model, zero, x, options.order), ctx);
    } else if (method == MethodId::kPredictionDifference ||
               method == MethodId::kExpectedGradients) {
      for (const Vector& draw : actual.baseline.draws) {
        Vector r = reconstruct(schema, expand(model, x, draw, options.order),
                               ctx);
        for (std::size_t i = 0; i < n; ++i) recon[i] += r[i];
      }
      for (double& v : recon) {
        v /= static_cast<double>(actual.baseline.draws.size());
      }
    } else {
      recon = reconstruct(schema, expand(model, x, b, options.order), ctx);
    }
    const double denom = norm(actual.values);
    if (denom == 0.0) return;
    Vector diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = recon[i] - actual.values[i];
    errors[s] = norm(diff) / denom;
  });
  FitReport report;
  report.method = method;
  report.order = options.order;
  double sum = 0.0;
  std::size_t used = 0;
  for (double e : errors) {
    report.per_sample.push_back(e);
    if (e < 0) {
      ++report.skipped;
      continue;
    }
    sum += e;
    ++used;
  }
  report.error_percent = used == 0 ? 0.0 : 100.0 * sum / used;
  return report;
}

bool IdentityLedger::all_passed() const {
  for (const IdentityCheck& c : checks) {
    if (!c.skipped && !c.passed) return false;
  }
  return true;
}

namespace {

struct CaseDraw {
  Vector x;
  Vector b;
};

bool near_relu_kink(const Model& m, ConstVec x, double margin) {
  if (!m.has_layers()) return false;
  ForwardTrace t = m.trace(x);
  for (std::size_t l = 0; l < m.layers().size(); ++l) {
    if (!m.layers()[l].activation.is_piecewise()) continue;
    for (double h : t.preactivations[l]) {
      if (std::abs(h) < margin) return true;
    }
  }
  return false;
}

CaseDraw draw_case(const Model& m, const VerifyOptions& o, std::size_t model_i,
                   std::size_t case_i) {
  auto engine = make_engine(o.seed, "verify_case", model_i * 1000 + case_i);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const bool image = m.kind() == ModelKind::kTinyCnn;
  CaseDraw c;
  for (int attempt = 0; attempt < 64; ++attempt) {
    c.x.assign(m.num_inputs(), 0.0);
    c.b.assign(m.num_inputs(), 0.0);
    for (double& v : c.x) v = image ? unit(engine) : normal(engine);
    for (std::size_t i = 0; i < c.b.size(); ++i) {
      c.b[i] = c.x[i] + o.baseline_sigma * normal(engine);
    }
    if (!near_relu_kink(m, c.x, 1e-6)) break;
  }
  return c;
}

Model unit_model(const DenseLayer& layer, std::size_t j, Activation act) {
  DenseLayer u;
  u.weights = Matrix(1, layer.inputs());
  for (std::size_t i = 0; i < layer.inputs(); ++i) {
    u.weights(0, i) = layer.weights(j, i);
  }
  u.bias = {layer.bias[j]};
  u.activation = act;
  return Model::mlp({u});
}

bool is_relu_net(const Model& m) {
  if (m.kind() != ModelKind::kMlp) return false;
  for (std::size_t l = 0; l + 1 < m.layers().size(); ++l) {
    if (m.layers()[l].activation.kind != ActivationKind::kRelu) return false;
  }
  const auto k = m.layers().back().activation.kind;
  return k == ActivationKind::kIdentity || k == ActivationKind::kRelu;
}

class LedgerBuilder {
 public:
  void add(const std::string& id, const std::string& statement,
           double tolerance) {
    IdentityCheck c;
    c.id = id;
    c.statement = statement;
    c.tolerance = tolerance;
    c.skipped = true;
    ledger_.checks.push_back(c);
  }
  void record(const std::string& id, double residual) {
    for (IdentityCheck& c : ledger_.checks) {
      if (c.id != id) continue;
      if (std::isnan(residual)) residual = INFINITY;
      c.skipped = false;
      c.residual = std::max(c.residual, residual);
      ++c.cases;
      c.passed = c.residual <= c.tolerance;
      return;
    }
  }
  IdentityLedger take() { return std::move(ledger_); }

 private:
  IdentityLedger ledger_;
};

}  // namespace

IdentityLedger verify_identities(const std::vector<Model>& family,
                                 const VerifyOptions& options) {
  LedgerBuilder lb;
  lb.add("harsanyi.equals_taylor_interaction",
         "Harsanyi dividend of S equals the Taylor effect of receptive field S",
         1e-9);
  lb.add("grad_input.first_order",
         "Gradient x Input equals the negated first-order terms at x", 1e-12);
  lb.add("occlusion_1.all_terms_of_variable",
         "Occlusion-1 equals the sum of every term involving the variable",
         1e-9);
  lb.add("occlusion_patch.terms_touching_patch",
         "Occlusion-patch equals every term touching the variable's patch",
         1e-9);
  lb.add("prediction_difference.point_mass",
         "Prediction difference with a point-mass baseline matches Occlusion-1",
         1e-9);
  lb.add("grad_cam.first_order_neurons",
         "Grad-CAM per-neuron maps equal first-order terms of the pooled head",
         1e-6);
  lb.add("integrated_gradients.proportional_split",
         "Integrated gradients splits terms by kappa_i / sum(kappa)", 1e-6);
  lb.add("expected_gradients.proportional_split",
         "Expected gradients averages the proportional split over baselines",
         1e-6);
  lb.add("shapley.uniform_split",
         "Shapley values split every term uniformly over its field", 1e-9);
  lb.add("lrp_epsilon.equals_grad_input",
         "LRP-epsilon equals Gradient x Input on ReLU networks", 1e-6);
  lb.add("lrp_alpha_beta.single_unit",
         "LRP-alpha-beta on one unit follows the group allocation", 1e-9);
  lb.add("deep_taylor.equals_alpha1_beta0",
         "Deep Taylor is LRP-alpha-beta with alpha = 1 and beta = 0 (bitwise)",
         0.0);
  lb.add("deeplift_rescale.single_unit",
         "DeepLIFT Rescale on one unit follows the proportional split", 1e-9);
  lb.add("deeplift_rescale.single_unit_matches_ig",
         "DeepLIFT Rescale on one unit matches integrated gradients", 1e-5);
  lb.add("deep_shap.single_unit",
         "Deep SHAP on one unit follows the uniform split", 1e-9);
  lb.add("deep_shap.single_unit_matches_shapley",
         "Deep SHAP on one unit equals its exact Shapley values", 1e-9);
  lb.add("deeplift_revealcancel.single_unit",
         "RevealCancel on one unit follows the half split of mixed terms",
         1e-9);

  for (std::size_t mi = 0; mi < family.size(); ++mi) {
    const Model& m = family[mi];
    const std::size_t n = m.num_inputs();
    for (std::size_t ci = 0; ci < options.cases_per_model; ++ci) {
      CaseDraw c = draw_case(m, options, mi, ci);
      const Vector zero(n, 0.0);
      {
        Vector a = grad_input(m, c.x).values;
        Vector r = reconstruct(schema_for(MethodId::kGradInput),
                               expand(m, zero, c.x, 1));
        lb.record("grad_input.first_order", relative_gap(a, r));
      }
      if (m.kind() == ModelKind::kPolynomial) {
        const int order = std::max(1, m.poly().degree());
        TaylorDecomposition d = expand(m, c.x, c.b, order);
        if (n <= kDefaultEnumerationLimit) {
          DividendComparison cmp =
              compare_dividends_with_taylor(m, c.x, c.b, order);
          double scale = 1.0;
          for (const DividendGap& g : cmp.subsets) {
            scale = std::max(scale, std::abs(g.dividend));
          }
          lb.record("harsanyi.equals_taylor_interaction", cmp.max_gap / scale);
          lb.record("shapley.uniform_split",
                    relative_gap(shapley_exact(m, c.x, c.b).values,
                                 reconstruct(schema_for(MethodId::kShapley), d)));
        }
        lb.record("occlusion_1.all_terms_of_variable",
                  relative_gap(occlusion_1(m, c.x, c.b).values,
                               reconstruct(schema_for(MethodId::kOcclusion1), d)));
        SchemaContext ctx;
        ctx.patches = window_patches(n, 2);
        lb.record("occlusion_patch.terms_touching_patch",
                  relative_gap(occlusion_patch(m, c.x, c.b, ctx.patches).values,
                               reconstruct(schema_for(MethodId::kOcclusionPatch),
                                           d, ctx)));
        const double b0 = c.b[0];
        const Vector bconst(n, b0);
        lb.record(
            "prediction_difference.point_mass",
            relative_gap(
                prediction_difference(m, c.x, b0, 0.0, 1, 0).values,
                reconstruct(schema_for(MethodId::kPredictionDifference),
                            expand(m, c.x, bconst, order))));
        lb.record("integrated_gradients.proportional_split",
                  relative_gap(integrated_gradients(m, c.x, c.b, 1000,
                                                    Quadrature::kMidpoint)
                                   .values,
                               reconstruct(schema_for(
                                               MethodId::kIntegratedGradients),
                                           d)));
        AttributionResult eg = expected_gradients(
            m, c.x, c.b, 0.1, 4, 1000, Quadrature::kMidpoint, options.seed + ci);
        Vector er(n, 0.0);
        for (const Vector& draw : eg.baseline.draws) {
          Vector r = reconstruct(schema_for(MethodId::kExpectedGradients),
                                 expand(m, c.x, draw, order));
          for (std::size_t i = 0; i < n; ++i) er[i] += r[i] / 4.0;
        }
        lb.record("expected_gradients.proportional_split",
                  relative_gap(eg.values, er));
        continue;
      }

      if (m.kind() == ModelKind::kTinyCnn) {
        ConvFeatureStack stack = conv_features(m, c.x);
        GradCamMaps maps = grad_cam(stack);
        // dy/dF^k by central differences on the pooled head.
        Vector f = stack.pooled();
        auto head = [&](const Vector& pooled) {
          double u = stack.head_bias;
          for (std::size_t k = 0; k < pooled.size(); ++k) {
            u += stack.head_weights[k] * pooled[k];
          }
          return stack.head_activation.value(u);
        };
        const double hw = static_cast<double>(stack.height * stack.width);
        Vector got;
        Vector want;
        for (std::size_t k = 0; k < f.size(); ++k) {
          Vector fp = f, fm = f;
          fp[k] += 1e-5;
          fm[k] -= 1e-5;
          const double dydf = (head(fp) - head(fm)) / 2e-5;
          for (std::size_t p = 0; p < stack.maps[k].size(); ++p) {
            got.push_back(maps.neuron_maps[k][p]);
            want.push_back(dydf / hw * stack.maps[k][p]);
          }
        }
        lb.record("grad_cam.first_order_neurons", relative_gap(got, want));
      }

      if (is_relu_net(m)) {
        lb.record("lrp_epsilon.equals_grad_input",
                  relative_gap(lrp_epsilon(m, c.x).values,
                               grad_input(m, c.x).values));
      }
      {
        Vector dt = deep_taylor(m, c.x).values;
        Vector ab = lrp_alpha_beta(m, c.x, 1.0, 0.0).values;
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (dt[i] != ab[i]) worst = std::max(worst, std::abs(dt[i] - ab[i]));
        }
        lb.record("deep_taylor.equals_alpha1_beta0", worst);
      }

      // Single units from the first layer, their inputs being the model input.
      const DenseLayer& first = m.layers().front();
      const std::size_t units = std::min<std::size_t>(first.outputs(), 3);
      for (std::size_t j = 0; j < units; ++j) {
        if (first.inputs() > kDefaultEnumerationLimit) break;
        const Model cubic = unit_model(first, j, Activation::cubic_sigmoid());
        const Model sig = unit_model(first, j, Activation::sigmoid());
        const DenseLayer& cu = cubic.layers().front();
        {
          BackpropOptions o;
          o.alpha = 0.75;
          o.beta = 0.25;
          o.output_relevance = cubic.evaluate(c.x) - cubic.evaluate(zero);
          Vector a =
              backpropagate(MethodId::kLrpAlphaBeta, cubic, c.x, zero, o).values;
          SchemaContext ctx =
              unit_context(MethodId::kLrpAlphaBeta, cu, c.x, zero, 0.75, 0.25);
          Vector r = reconstruct(schema_for(MethodId::kLrpAlphaBeta),
                                 expand(cubic, c.x, zero, 3), ctx);
          lb.record("lrp_alpha_beta.single_unit", relative_gap(a, r));
        }
        const TaylorDecomposition d = expand(cubic, c.x, c.b, 3);
        lb.record("deeplift_rescale.single_unit",
                  relative_gap(deeplift_rescale(cubic, c.x, c.b).values,
                               reconstruct(schema_for(MethodId::kDeepLiftRescale),
                                           d)));
        lb.record("deep_shap.single_unit",
                  relative_gap(deep_shap(cubic, c.x, c.b).values,
                               reconstruct(schema_for(MethodId::kDeepShap), d)));
        {
          SchemaContext ctx = unit_context(MethodId::kDeepLiftRevealCancel, cu,
                                           c.x, c.b);
          lb.record("deeplift_revealcancel.single_unit",
                    relative_gap(deeplift_revealcancel(cubic, c.x, c.b).values,
                                 reconstruct(schema_for(
                                                 MethodId::kDeepLiftRevealCancel),
                                             d, ctx)));
        }
        lb.record("deeplift_rescale.single_unit_matches_ig",
                  relative_gap(deeplift_rescale(sig, c.x, c.b).values,
                               integrated_gradients(sig, c.x, c.b, 300,
                                                    Quadrature::kMidpoint)
                                   .values));
        lb.record("deep_shap.single_unit_matches_shapley",
                  relative_gap(deep_shap(sig, c.x, c.b).values,
                               shapley_exact(sig, c.x, c.b).values));
      }
    }
  }
  return lb.take();
}

}  // namespace taylorx
