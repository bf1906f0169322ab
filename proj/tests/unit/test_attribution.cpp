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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "taylorx/attribution.hpp"
#include "taylorx/backprop.hpp"
#include "taylorx/datasets.hpp"
#include "taylorx/error.hpp"
#include "taylorx/gradcam.hpp"
#include "taylorx/training.hpp"

namespace tx = taylorx;
using tx::MethodId;
using tx::Vector;

namespace {

tx::Model canonical() {
  tx::Polynomial p;
  p.num_inputs = 3;
  p.terms = {{3.0, {{0, 1}}}, {2.0, {{0, 1}, {1, 1}, {2, 1}}}};
  return tx::Model::polynomial(p);
}

double sum(const Vector& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

void expect_near(const Vector& a, const Vector& b, double tol) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a[i], b[i], tol) << "index " << i;
  }
}

}  // namespace

TEST(Methods, NamesRoundTrip) {
  EXPECT_EQ(tx::all_methods().size(), 14u);
  for (MethodId m : tx::all_methods()) {
    EXPECT_EQ(tx::parse_method(tx::method_name(m)), m);
  }
  EXPECT_EQ(tx::parse_method("shapley_exact"), MethodId::kShapley);
  EXPECT_THROW(tx::parse_method("saliency"), tx::Error);
  EXPECT_TRUE(tx::is_backprop(MethodId::kDeepShap));
  EXPECT_FALSE(tx::is_backprop(MethodId::kGradCam));
}

TEST(Methods, CanonicalExampleValues) {
  const auto m = canonical();
  const Vector x = {1, 1, 1}, b = {0, 0, 0};
  expect_near(tx::grad_input(m, x).values, {5, 2, 2}, 1e-15);
  expect_near(tx::occlusion_1(m, x, b).values, {5, 2, 2}, 1e-15);
  expect_near(tx::shapley_exact(m, x, b).values, {3 + 2.0 / 3, 2.0 / 3, 2.0 / 3},
              1e-15);
  expect_near(tx::integrated_gradients(m, x, b, 300, tx::Quadrature::kMidpoint).values,
              {3 + 2.0 / 3, 2.0 / 3, 2.0 / 3}, 1e-5);
  expect_near(tx::occlusion_patch(m, x, b, {tx::VarSet{0, 1}, tx::VarSet{2}}).values,
              {5, 5, 2}, 1e-15);
}

TEST(Methods, ShapleyMatchesPermutationOracle) {
  const auto m = tx::random_mlp({6, 4, 1}, tx::Activation::sigmoid(),
                                tx::Activation::identity(), 3);
  const Vector x = tx::gaussian_samples(6, 1, 1)[0];
  const Vector b = tx::gaussian_samples(6, 1, 2)[0];
  const Vector phi = tx::shapley_exact(m, x, b).values;
  expect_near(phi, oracle::shapley_permutations(m, x, b), 1e-12);
  EXPECT_NEAR(sum(phi), m.evaluate(x) - m.evaluate(b), 1e-12);
  EXPECT_THROW(tx::shapley_exact(m, x, b, 5), tx::BudgetError);
}

TEST(Methods, IntegratedGradientsConvergesToGaussLegendreOracle) {
  const auto m = tx::random_mlp({4, 5, 1}, tx::Activation::softplus(),
                                tx::Activation::sigmoid(), 7);
  const Vector x = {0.5, -1.0, 0.3, 1.2};
  const Vector b = {0.0, 0.2, -0.4, 0.1};
  const Vector ref = oracle::integrated_gradients(m, x, b, 32);
  double prev = INFINITY;
  for (std::size_t steps : {10u, 20u, 40u, 80u, 160u}) {
    const Vector ig =
        tx::integrated_gradients(m, x, b, steps, tx::Quadrature::kMidpoint).values;
    double err = 0.0;
    for (std::size_t i = 0; i < 4; ++i) err = std::max(err, std::abs(ig[i] - ref[i]));
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(prev, 1e-6);
}

TEST(Methods, QuadratureNodes) {
  EXPECT_EQ(tx::quadrature_nodes(4, tx::Quadrature::kMidpoint),
            (Vector{0.125, 0.375, 0.625, 0.875}));
  EXPECT_EQ(tx::quadrature_nodes(2, tx::Quadrature::kLeft), (Vector{0.0, 0.5}));
  EXPECT_EQ(tx::quadrature_nodes(2, tx::Quadrature::kRight), (Vector{0.5, 1.0}));
  EXPECT_THROW(tx::quadrature_nodes(0, tx::Quadrature::kLeft), tx::Error);
}

TEST(Methods, PointMassBaselinesReduceToFixedBaselines) {
  const auto m = tx::random_polynomial_deg2(4, 5);
  const Vector x = {0.3, 0.1, -0.6, 1.0};
  const auto pd = tx::prediction_difference(m, x, 0.25, 0.0, 3, 9);
  expect_near(pd.values, tx::occlusion_1(m, x, Vector(4, 0.25)).values, 1e-14);
  EXPECT_EQ(pd.baseline.origin, "point-mass");
  const Vector c = {0.1, 0.2, 0.3, 0.4};
  expect_near(
      tx::expected_gradients(m, x, c, 0.0, 2, 50, tx::Quadrature::kMidpoint, 1).values,
      tx::integrated_gradients(m, x, c, 50, tx::Quadrature::kMidpoint).values, 1e-14);
}

TEST(Methods, BaselineDrawsAreSeeded) {
  const Vector c = {0.0, 1.0};
  EXPECT_EQ(tx::draw_vector_baselines(c, 0.3, 5, 11),
            tx::draw_vector_baselines(c, 0.3, 5, 11));
  EXPECT_NE(tx::draw_vector_baselines(c, 0.3, 5, 11),
            tx::draw_vector_baselines(c, 0.3, 5, 12));
  EXPECT_EQ(tx::draw_scalar_baselines(0.0, 1.0, 4, 3).size(), 4u);
}

TEST(Methods, PartitionValidation) {
  EXPECT_NO_THROW(tx::validate_partition({tx::VarSet{0, 1}, tx::VarSet{2}}, 3));
  EXPECT_THROW(tx::validate_partition({tx::VarSet{0, 1}, tx::VarSet{1, 2}}, 3),
               tx::Error);
  EXPECT_THROW(tx::validate_partition({tx::VarSet{0}}, 3), tx::Error);
  const auto g = tx::grid_patches(4, 4, 2, 2);
  EXPECT_EQ(g.size(), 4u);
  EXPECT_EQ(g[0], (tx::VarSet{0, 1, 4, 5}));
  EXPECT_EQ(tx::window_patches(5, 2).size(), 3u);
}

TEST(Backprop, LrpEpsilonEqualsGradInputOnRelu) {
  const auto m = tx::random_mlp({5, 6, 4, 1}, tx::Activation::relu(),
                                tx::Activation::identity(), 21);
  const Vector x = tx::gaussian_samples(5, 1, 4)[0];
  expect_near(tx::lrp_epsilon(m, x, 1e-12).values, tx::grad_input(m, x).values,
              1e-9);
}

TEST(Backprop, DeepLiftFamilySumsToOutputChange) {
  const auto m = tx::random_mlp({5, 4, 3, 1}, tx::Activation::sigmoid(),
                                tx::Activation::identity(), 22);
  const Vector x = tx::gaussian_samples(5, 1, 5)[0];
  const Vector r = tx::gaussian_samples(5, 1, 6)[0];
  const double delta = m.evaluate(x) - m.evaluate(r);
  EXPECT_NEAR(sum(tx::deeplift_rescale(m, x, r).values), delta, 1e-12);
  EXPECT_NEAR(sum(tx::deeplift_revealcancel(m, x, r).values), delta, 1e-12);
  EXPECT_NEAR(sum(tx::deep_shap(m, x, r).values), delta, 1e-12);
}

TEST(Backprop, DeepShapSingleUnitIsExactShapley) {
  const auto unit = tx::random_mlp({6, 1}, tx::Activation::softplus(2.0),
                                   tx::Activation::softplus(2.0), 23);
  const Vector x = tx::gaussian_samples(6, 1, 7)[0];
  const Vector r = tx::gaussian_samples(6, 1, 8)[0];
  expect_near(tx::deep_shap(unit, x, r).values,
              oracle::shapley_permutations(unit, x, r), 1e-12);
}

TEST(Backprop, RevealCancelSingleUnitTwoPlayerSplit) {
  tx::DenseLayer u{tx::Matrix(1, 3), {0.2}, tx::Activation::sigmoid()};
  u.weights(0, 0) = 1.0;
  u.weights(0, 1) = 2.0;
  u.weights(0, 2) = -1.5;
  const auto m = tx::Model::mlp({u});
  const Vector x = {1.0, 0.5, 1.0}, r = {0.0, 0.0, 0.0};
  // dz = (1, 1, -1.5): positive group {0, 1}, negative group {2}.
  auto s = [](double t) { return 1.0 / (1.0 + std::exp(-t)); };
  const double base = 0.2, dp = 2.0, dn = -1.5;
  const double yp = 0.5 * (s(base + dp) - s(base)) + 0.5 * (s(base + dp + dn) - s(base + dn));
  const double yn = 0.5 * (s(base + dn) - s(base)) + 0.5 * (s(base + dp + dn) - s(base + dp));
  expect_near(tx::deeplift_revealcancel(m, x, r).values, {yp / 2, yp / 2, yn}, 1e-14);
}

TEST(Backprop, DeepTaylorBitwiseEqualsAlphaOneBetaZero) {
  const auto m = tx::random_mlp({6, 7, 1}, tx::Activation::relu(),
                                tx::Activation::relu(), 24);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Vector x = tx::gaussian_samples(6, 1, 30 + s)[0];
    const Vector a = tx::deep_taylor(m, x).values;
    const Vector b = tx::lrp_alpha_beta(m, x, 1.0, 0.0).values;
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
  }
}

TEST(Backprop, AlphaBetaModuleShares) {
  tx::DenseLayer u{tx::Matrix(1, 3), {0.0}, tx::Activation::identity()};
  u.weights(0, 0) = 1.0;
  u.weights(0, 1) = 3.0;
  u.weights(0, 2) = -2.0;
  tx::BackpropOptions o;
  o.alpha = 0.75;
  o.beta = 0.25;
  const Vector in = {1.0, 1.0, 1.0};
  const auto s = tx::module_shares(MethodId::kLrpAlphaBeta, u, in, {}, o);
  EXPECT_DOUBLE_EQ(s.ratios(0, 0), 0.75 * 1.0 / 4.0);
  EXPECT_DOUBLE_EQ(s.ratios(1, 0), 0.75 * 3.0 / 4.0);
  EXPECT_DOUBLE_EQ(s.ratios(2, 0), 0.25);
}

TEST(Backprop, GuardsRecordTinyDenominators) {
  const auto m = tx::random_mlp({3, 2, 1}, tx::Activation::sigmoid(),
                                tx::Activation::identity(), 25);
  const Vector x = {0.4, 0.1, -0.2};
  const auto r = tx::deeplift_rescale(m, x, x);
  EXPECT_FALSE(r.guards.empty());
  for (double v : r.values) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(tx::lrp_epsilon(canonical(), Vector{1, 1, 1}), tx::UnsupportedError);
}

TEST(Backprop, KeepLayersThroughAttribute) {
  const auto m = tx::random_mlp({3, 2, 1}, tx::Activation::relu(),
                                tx::Activation::identity(), 26);
  tx::MethodConfig c;
  c.keep_layers = true;
  const auto r = tx::attribute(MethodId::kLrpEpsilon, m, Vector{1, 2, 3},
                               Vector(3, 0.0), c);
  ASSERT_TRUE(r.layers.has_value());
  EXPECT_EQ(r.layers->relevance.size(), 3u);
  c.keep_layers = false;
  EXPECT_FALSE(tx::attribute(MethodId::kLrpEpsilon, m, Vector{1, 2, 3},
                             Vector(3, 0.0), c)
                   .layers.has_value());
}

TEST(GradCam, NeuronMapsAreFirstOrderTermsOfIdentityHead) {
  const auto m = tx::random_tiny_cnn(3, 3, 2, tx::Activation::sigmoid(), 27);
  const Vector x = tx::gaussian_samples(9, 1, 9)[0];
  const auto stack = tx::conv_features(m, x);
  EXPECT_NEAR(stack.output(), m.evaluate(x), 1e-12);
  const auto maps = tx::grad_cam(stack);
  double total = 0.0;
  for (std::size_t k = 0; k < maps.neuron_maps.size(); ++k) {
    EXPECT_NEAR(maps.alphas[k], m.conv().head_weights[k] / 9.0, 1e-15);
    total += sum(maps.neuron_maps[k]);
  }
  EXPECT_NEAR(total, m.evaluate(x) - m.conv().head_bias, 1e-12);
  const auto r = tx::grad_cam(m, x);
  EXPECT_EQ(r.values.size(), 9u);
  for (std::size_t i = 0; i < 9; ++i) {
    EXPECT_EQ(r.values[i], std::max(0.0, r.pre_relu[i]));
  }
}

TEST(GradCam, NonIdentityHeadNeedsUncheckedVariant) {
  tx::ConvFeatureStack s;
  s.height = 1;
  s.width = 2;
  s.maps = {{1.0, 2.0}};
  s.head_weights = {4.0};
  s.head_activation = tx::Activation::sigmoid();
  EXPECT_THROW(tx::grad_cam(s), tx::UnsupportedError);
  EXPECT_EQ(tx::grad_cam_unchecked(s).neuron_maps.size(), 1u);
  EXPECT_THROW(tx::grad_cam(canonical(), Vector{1, 1, 1}), tx::UnsupportedError);
}
