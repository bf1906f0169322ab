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

#include "taylorx/datasets.hpp"
#include "taylorx/error.hpp"
#include "taylorx/metrics.hpp"
#include "taylorx/training.hpp"

namespace tx = taylorx;
using tx::Vector;

namespace {

tx::Model linear(const Vector& w) {
  tx::Polynomial p;
  p.num_inputs = w.size();
  for (std::size_t i = 0; i < w.size(); ++i) p.terms.push_back({w[i], {{i, 1}}});
  return tx::Model::polynomial(p);
}

}  // namespace

TEST(Infidelity, ZeroForGradientOnLinearModels) {
  const Vector w = {0.5, -1.0, 2.0, 0.3, 0.0, 1.1};
  const auto m = linear(w);
  const Vector x = tx::gaussian_samples(6, 1, 1)[0];
  tx::PerturbationSpec spec;
  spec.grid = {2, 3};
  EXPECT_LT(tx::infidelity(m, x, w, spec), 1e-25);
  spec.kind = tx::PerturbationKind::kGaussian;
  EXPECT_LT(tx::infidelity(m, x, w, spec), 1e-25);
}

TEST(Infidelity, ZeroAttributionMeasuresOutputChange) {
  const auto m = tx::random_polynomial_deg2(4, 2);
  const Vector x = {1.0, -0.5, 0.3, 2.0};
  tx::PerturbationSpec spec;
  spec.kind = tx::PerturbationKind::kGaussian;
  spec.sigma = 0.5;
  spec.samples = 40;
  spec.seed = 3;
  double expected = 0.0;
  for (const Vector& p : tx::draw_perturbations(x, spec)) {
    Vector moved = x;
    for (std::size_t i = 0; i < 4; ++i) moved[i] -= p[i];
    const double d = m.evaluate(x) - m.evaluate(moved);
    expected += d * d / 40.0;
  }
  EXPECT_NEAR(tx::infidelity(m, x, Vector(4, 0.0), spec), expected, 1e-12);
  EXPECT_GT(expected, 0.0);
}

TEST(Infidelity, QuadraticFormInAttribution) {
  // INFD(a) = a' E[p p'] a - 2 a' E[p d] + E[d^2] on a two-variable model.
  tx::Polynomial p;
  p.num_inputs = 2;
  p.terms = {{1.0, {{0, 1}, {1, 1}}}, {0.5, {{0, 2}}}};
  const auto m = tx::Model::polynomial(p);
  const Vector x = {0.7, -1.2};
  tx::PerturbationSpec spec;
  spec.kind = tx::PerturbationKind::kGaussian;
  spec.sigma = 0.3;
  spec.samples = 25;
  spec.seed = 4;
  double s00 = 0, s01 = 0, s11 = 0, q0 = 0, q1 = 0, dd = 0;
  const auto draws = tx::draw_perturbations(x, spec);
  for (const Vector& e : draws) {
    const double d = m.evaluate(x) - m.evaluate(Vector{x[0] - e[0], x[1] - e[1]});
    s00 += e[0] * e[0];
    s01 += e[0] * e[1];
    s11 += e[1] * e[1];
    q0 += e[0] * d;
    q1 += e[1] * d;
    dd += d * d;
  }
  const double n = static_cast<double>(draws.size());
  const Vector a = {0.4, 1.5};
  for (double scale : {1.0, 2.0}) {
    const double a0 = scale * a[0], a1 = scale * a[1];
    const double form =
        (a0 * a0 * s00 + 2 * a0 * a1 * s01 + a1 * a1 * s11 - 2 * (a0 * q0 + a1 * q1) + dd) / n;
    EXPECT_NEAR(tx::infidelity(m, x, Vector{a0, a1}, spec), form, 1e-12);
  }
}

TEST(Infidelity, SquareRemovalGeometryAndErrors) {
  const Vector x = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  tx::PerturbationSpec spec;
  spec.grid = {3, 3};
  spec.side = 2;
  spec.samples = 20;
  for (const Vector& p : tx::draw_perturbations(x, spec)) {
    std::size_t removed = 0;
    for (std::size_t i = 0; i < 9; ++i) {
      if (p[i] != 0.0) {
        EXPECT_EQ(p[i], x[i]);
        ++removed;
      }
    }
    EXPECT_EQ(removed, 4u);
  }
  EXPECT_EQ(tx::draw_perturbations(x, spec), tx::draw_perturbations(x, spec));
  spec.grid = {2, 2};
  EXPECT_THROW(tx::draw_perturbations(x, spec), tx::DimensionError);
  spec.grid = {3, 3};
  spec.samples = 0;
  EXPECT_THROW(tx::infidelity(linear(Vector(9, 1.0)), x, x, spec), tx::Error);
}

TEST(BoundingBox, WorkedCasesAndTies) {
  const tx::VarSet box{1, 2, 3, 4};
  EXPECT_EQ(tx::bbox_accuracy(Vector{0, 5, 6, 7, 8, 0, 0, 0}, box), 1.0);
  EXPECT_EQ(tx::bbox_accuracy(Vector{9, 0, 0, 0, 0, 9, 9, 9}, box), 0.0);
  EXPECT_EQ(tx::bbox_accuracy(Vector{0, 9, 8, 1, 1, 7, 6, 0}, box), 0.5);
  EXPECT_EQ(tx::top_m(Vector{1, 3, 3, 3, 0}, 2), (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(tx::top_m(Vector(4, 0.0), 3), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_THROW(tx::bbox_accuracy(Vector{1, 2}, tx::VarSet{}), tx::Error);
  EXPECT_THROW(tx::top_m(Vector{1, 2}, 3), tx::Error);
  EXPECT_TRUE(tx::box_eligible(3, 10));
  EXPECT_FALSE(tx::box_eligible(3, 9));
  EXPECT_FALSE(tx::box_eligible(0, 9));
}

TEST(Correlation, ShapeStatusAndDeterminism) {
  const std::vector<tx::Model> models = {tx::random_polynomial_deg2(4, 5)};
  const auto samples = tx::gaussian_samples(4, 3, 6);
  tx::CorrelationOptions o;
  o.perturbation.grid = {2, 2};
  o.method.steps = 32;
  const auto rows = tx::principle_correlation(models, samples, {}, o);
  ASSERT_EQ(rows.size(), 14u);
  std::size_t na = 0;
  for (const auto& r : rows) {
    if (r.status != "ok") {
      ++na;
      EXPECT_TRUE(std::isnan(r.value));
    } else {
      EXPECT_GE(r.value, 0.0);
    }
  }
  // Grad-CAM and the six back-propagation rules need layered models.
  EXPECT_EQ(na, 7u);
  EXPECT_EQ(tx::to_csv(rows), tx::to_csv(tx::principle_correlation(models, samples, {}, o)));
}

TEST(Correlation, BoundingBoxOnPlantedBars) {
  const auto data = tx::planted_box({3, 4}, 6, 7);
  auto cnn = tx::random_tiny_cnn(3, 4, 2, tx::Activation::sigmoid(), 8);
  tx::CorrelationOptions o;
  o.metric = "bbox";
  o.method.steps = 16;
  const auto rows = tx::principle_correlation({cnn}, data.inputs, data.boxes, o);
  for (const auto& r : rows) {
    if (r.status == "ok") {
      EXPECT_GE(r.value, 0.0);
      EXPECT_LE(r.value, 1.0);
    }
  }
  EXPECT_THROW(tx::principle_correlation({cnn}, data.inputs, {}, o),
               tx::DimensionError);
  o.metric = "auc";
  EXPECT_THROW(tx::principle_correlation({cnn}, data.inputs, data.boxes, o),
               tx::Error);
}

TEST(Datasets, PlantedBoxesMarkTheBar) {
  const auto d = tx::planted_box({4, 4}, 10, 9);
  for (std::size_t s = 0; s < d.inputs.size(); ++s) {
    if (d.targets[s] == 1.0) {
      EXPECT_EQ(d.boxes[s].size(), 3u);
      for (std::size_t i : d.boxes[s].members()) EXPECT_GE(d.inputs[s][i], 0.7);
    } else {
      EXPECT_TRUE(d.boxes[s].empty());
    }
  }
}
