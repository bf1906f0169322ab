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

#include <atomic>
#include <stdexcept>

#include "taylorx/error.hpp"
#include "taylorx/jet.hpp"
#include "taylorx/parallel.hpp"
#include "taylorx/random.hpp"
#include "taylorx/taylor.hpp"
#include "taylorx/types.hpp"

namespace tx = taylorx;

TEST(VarSet, MembershipAndFormatting) {
  tx::VarSet s{0, 2, 5};
  EXPECT_EQ(s.size(), 3u);
  EXPECT_TRUE(s.contains(2));
  EXPECT_FALSE(s.contains(1));
  EXPECT_EQ(s.to_string(), "{0,2,5}");
  EXPECT_EQ(s.with(1).without(0).to_string(), "{1,2,5}");
  EXPECT_EQ(tx::VarSet::full(3).mask(), 7u);
  EXPECT_TRUE(tx::VarSet{2}.subset_of(s));
  EXPECT_FALSE(tx::VarSet{}.intersects(s));
  EXPECT_EQ(tx::VarSet().to_string(), "{}");
}

TEST(DegreeVector, ParseRoundTrip) {
  const auto k = tx::DegreeVector::parse("0:1;2:2");
  EXPECT_EQ(k.order(), 3);
  EXPECT_EQ(k.exponent(2), 2);
  EXPECT_EQ(k.exponent(1), 0);
  EXPECT_EQ(k.receptive_field(), (tx::VarSet{0, 2}));
  EXPECT_DOUBLE_EQ(k.factorial(), 2.0);
  EXPECT_EQ(tx::DegreeVector::parse(k.to_string()), k);
  EXPECT_TRUE(tx::DegreeVector::unit(4).is_unit(4));
  EXPECT_EQ(k.order_within(tx::VarSet{2}), 2);
}

TEST(DegreeVector, RejectsMalformedText) {
  EXPECT_THROW(tx::DegreeVector::parse("0:x"), tx::Error);
  EXPECT_THROW(tx::DegreeVector::parse("0:1;0:2"), tx::Error);
}

TEST(Random, SubstreamsAreStableAndDistinct) {
  EXPECT_EQ(tx::substream_seed(7, "a", 1), tx::substream_seed(7, "a", 1));
  EXPECT_NE(tx::substream_seed(7, "a", 1), tx::substream_seed(7, "a", 2));
  EXPECT_NE(tx::substream_seed(7, "a", 1), tx::substream_seed(7, "b", 1));
  EXPECT_NE(tx::substream_seed(7, "a", 1), tx::substream_seed(8, "a", 1));
  // Published FNV-1a test vectors.
  EXPECT_EQ(tx::fnv1a64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(tx::fnv1a64("a"), 0xaf63dc4c8601ec8cull);
}

TEST(Parallel, EveryIndexOnceAndExceptionsPropagate) {
  tx::set_worker_count(4);
  std::vector<int> hits(1000, 0);
  tx::parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(tx::parallel_for(10,
                                [](std::size_t i) {
                                  if (i == 7) throw std::runtime_error("boom");
                                }),
               std::runtime_error);
  tx::set_worker_count(1);
}

TEST(Jet, TermCountMatchesBinomial) {
  EXPECT_EQ(tx::count_terms(4, 3), 34u);
  EXPECT_EQ(tx::count_terms(10, 2), 65u);
  for (std::size_t n = 1; n <= 6; ++n) {
    for (int k = 1; k <= 4; ++k) {
      EXPECT_EQ(tx::MonomialBasis::make(n, k, 1 << 20)->size(),
                tx::count_terms(n, k) + 1);
    }
  }
  EXPECT_THROW(tx::MonomialBasis::make(30, 6, 1000), tx::BudgetError);
}

TEST(Jet, ProductRule) {
  // (2 + t0)(3 + t1 - t0) = 6 - 2 t0 + ... check every coefficient.
  auto basis = tx::MonomialBasis::make(2, 2, 1000);
  tx::Jet a = tx::Jet::variable(basis, 0, 2.0);
  tx::Jet b = tx::Jet::variable(basis, 1, 3.0) - tx::Jet::variable(basis, 0, 0.0);
  tx::Jet p = a * b;
  for (std::size_t i = 0; i < basis->size(); ++i) {
    auto e = basis->exponents(i);
    double expected = 0.0;
    if (e[0] == 0 && e[1] == 0) expected = 6.0;
    if (e[0] == 1 && e[1] == 0) expected = 3.0 - 2.0;
    if (e[0] == 0 && e[1] == 1) expected = 2.0;
    if (e[0] == 2 && e[1] == 0) expected = -1.0;
    if (e[0] == 1 && e[1] == 1) expected = 1.0;
    EXPECT_DOUBLE_EQ(p[i], expected) << "monomial " << i;
  }
}

TEST(Jet, ComposeMatchesExpSeries) {
  auto basis = tx::MonomialBasis::make(1, 5, 100);
  tx::Jet t = tx::Jet::variable(basis, 0, 0.0);
  tx::Vector series = {1.0, 1.0, 0.5, 1.0 / 6, 1.0 / 24, 1.0 / 120};
  tx::Jet e = t.compose(series);
  for (std::size_t i = 0; i < basis->size(); ++i) {
    EXPECT_DOUBLE_EQ(e[i], series[basis->degree(i)]);
  }
}
