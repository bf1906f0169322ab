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
#include <algorithm>

#include "oracles.hpp"
#include "taylorx/datasets.hpp"
#include "taylorx/error.hpp"
#include "taylorx/harsanyi.hpp"
#include "taylorx/jet.hpp"
#include "taylorx/taylor.hpp"
#include "taylorx/training.hpp"

namespace tx = taylorx;
using tx::Vector;

namespace {

tx::Model canonical() {
  tx::Polynomial p;
  p.num_inputs = 3;
  p.terms = {{3.0, {{0, 1}}}, {2.0, {{0, 1}, {1, 1}, {2, 1}}}};
  return tx::Model::polynomial(p);
}

tx::Model mixed_polynomial() {
  tx::Polynomial p;
  p.num_inputs = 4;
  p.constant = 0.5;
  p.terms = {{1.5, {{0, 2}, {1, 1}}},
             {-2.0, {{2, 3}}},
             {0.7, {{1, 1}, {3, 1}}},
             {1.1, {{3, 1}}}};
  return tx::Model::polynomial(p);
}

}  // namespace

TEST(Expand, CanonicalExample) {
  const auto d = tx::expand(canonical(), Vector{1, 1, 1}, Vector{0, 0, 0}, 3);
  EXPECT_EQ(d.terms().size(), tx::count_terms(3, 3));
  EXPECT_DOUBLE_EQ(d.independent_effect(tx::DegreeVector::unit(0)), 3.0);
  EXPECT_DOUBLE_EQ(d.interaction_effect(tx::VarSet{0, 1, 2}), 2.0);
  EXPECT_DOUBLE_EQ(d.interaction_effect(tx::VarSet{0, 1}), 0.0);
  EXPECT_DOUBLE_EQ(d.generic_independent_effect(0), 3.0);
  EXPECT_NEAR(d.residual(), 0.0, 1e-15);
  EXPECT_FALSE(d.piecewise_local());
  // At K = 2 the cubic term is truncated away.
  EXPECT_NEAR(tx::expand(canonical(), Vector{1, 1, 1}, Vector{0, 0, 0}, 2).residual(),
              2.0, 1e-15);
}

TEST(Expand, MatchesBinomialOracleOnPolynomials) {
  const auto m = mixed_polynomial();
  const Vector x = {0.3, -1.2, 0.8, 2.0};
  const Vector b = {-0.5, 0.4, 1.1, -0.2};
  const auto d = tx::expand(m, x, b, 3);
  const auto ref = oracle::polynomial_terms(m.poly(), x, b);
  std::size_t matched = 0;
  for (const auto& t : d.terms()) {
    std::vector<int> dense(4, 0);
    for (auto [i, e] : t.kappa.entries()) dense[i] = static_cast<int>(e);
    auto it = ref.find(dense);
    const double expected = it == ref.end() ? 0.0 : it->second;
    if (it != ref.end()) ++matched;
    EXPECT_NEAR(t.value, expected, 1e-12) << t.kappa.to_string();
    EXPECT_NEAR(t.value, t.coefficient * t.derivative * t.displacement, 1e-12);
  }
  EXPECT_EQ(matched, ref.size());
  EXPECT_NEAR(d.residual(), 0.0, 1e-12);
}

TEST(Expand, GeneratedTermCountAndDerivativesAgainstFiniteDifferences) {
  const auto m = tx::random_mlp({4, 5, 1}, tx::Activation::sigmoid(),
                                tx::Activation::identity(), 4);
  const Vector x = {0.2, -0.3, 0.5, 0.1};
  const Vector b = {0.0, 0.1, 0.4, -0.2};
  const auto d = tx::expand(m, x, b, 2);
  EXPECT_EQ(d.terms().size(), 14u);
  const Vector g = oracle::fd_gradient(m, b, 1e-6);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto* t = d.find(tx::DegreeVector::unit(i));
    ASSERT_NE(t, nullptr);
    EXPECT_NEAR(t->derivative, g[i], 1e-7);
    EXPECT_DOUBLE_EQ(t->displacement, x[i] - b[i]);
  }
}

TEST(Expand, ResidualShrinksWithOrderOnSmoothModels) {
  const auto m = tx::random_mlp({5, 4, 1}, tx::Activation::sigmoid(),
                                tx::Activation::sigmoid(), 6);
  const Vector x = tx::gaussian_samples(5, 1, 1)[0];
  Vector b = x;
  for (double& v : b) v += 0.2;
  double prev = INFINITY;
  for (int k = 1; k <= 4; ++k) {
    const double r = std::abs(tx::expand(m, x, b, k).residual());
    EXPECT_LT(r, prev) << "order " << k;
    prev = r;
  }
}

TEST(Expand, ReluUsesLocalPieceAndRejectsKinks) {
  tx::DenseLayer l1{tx::Matrix(2, 2), {0.0, -1.0}, tx::Activation::relu()};
  l1.weights(0, 0) = 1.0;
  l1.weights(1, 1) = 1.0;
  tx::DenseLayer l2{tx::Matrix(1, 2, 1.0), {0.0}, tx::Activation::identity()};
  const auto m = tx::Model::mlp({l1, l2});
  const auto d = tx::expand(m, Vector{2.0, 3.0}, Vector{1.0, 2.0}, 2);
  EXPECT_TRUE(d.piecewise_local());
  EXPECT_NEAR(d.residual(), 0.0, 1e-15);
  EXPECT_THROW(tx::expand(m, Vector{2.0, 3.0}, Vector{0.0, 2.0}, 2),
               tx::DomainError);
}

TEST(Expand, Budgets) {
  const auto m = tx::random_polynomial_deg2(8, 1);
  tx::ExpandOptions o;
  o.max_terms = 10;
  EXPECT_THROW(tx::expand(m, Vector(8, 1.0), Vector(8, 0.0), 2, o),
               tx::BudgetError);
  EXPECT_THROW(tx::expand(m, Vector(8, 1.0), Vector(7, 0.0), 2),
               tx::DimensionError);
}

TEST(Expand, CsvHeaderAndRows) {
  const auto d = tx::expand(canonical(), Vector{1, 1, 1}, Vector{0, 0, 0}, 1);
  const std::string csv = tx::to_csv(d);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "kappa,order,field,coefficient,derivative,displacement,value");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(Harsanyi, MatchesAlternatingSumOracle) {
  const auto m = tx::random_mlp({5, 4, 1}, tx::Activation::softplus(),
                                tx::Activation::identity(), 2);
  const Vector x = tx::gaussian_samples(5, 1, 3)[0];
  const Vector b = tx::gaussian_samples(5, 1, 4)[0];
  const auto h = tx::harsanyi(m, x, b);
  for (std::uint64_t s = 1; s < 32; ++s) {
    EXPECT_NEAR(h.dividend(tx::VarSet(s)), oracle::harsanyi(m, x, b, s), 1e-12);
  }
}

TEST(Harsanyi, MobiusRoundTripAndEfficiency) {
  const auto m = mixed_polynomial();
  const Vector x = {1.0, 2.0, -1.0, 0.5};
  const Vector b = {0.1, 0.2, 0.3, 0.4};
  const Vector v = tx::coalition_values(m, x, b);
  const auto h = tx::HarsanyiTable::from_values(4, v);
  for (std::uint64_t t = 0; t < 16; ++t) {
    EXPECT_NEAR(h.coalition_value(tx::VarSet(t)), v[t], 1e-12);
  }
  double sum = 0.0;
  for (std::size_t s = 1; s < 16; ++s) sum += h.dividends()[s];
  EXPECT_NEAR(sum, m.evaluate(x) - m.evaluate(b), 1e-12);
}

TEST(Harsanyi, EqualsTaylorInteractionOnPolynomials) {
  const auto m = mixed_polynomial();
  const auto cmp = tx::compare_dividends_with_taylor(
      m, Vector{0.4, -0.7, 1.3, 0.2}, Vector{-0.1, 0.3, 0.9, 1.0}, 3);
  EXPECT_LT(cmp.max_gap, 1e-12);
  EXPECT_EQ(cmp.subsets.size(), 15u);
  EXPECT_LT(std::abs(cmp.efficiency_gap), 1e-12);
}

TEST(Harsanyi, EnumerationLimit) {
  const auto m = tx::random_polynomial_deg2(6, 1);
  EXPECT_THROW(tx::harsanyi(m, Vector(6, 1.0), Vector(6, 0.0), 5),
               tx::BudgetError);
  const std::string csv = tx::to_csv(tx::harsanyi(canonical(), Vector{1, 1, 1},
                                                  Vector{0, 0, 0}));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "subset,size,dividend");
}
