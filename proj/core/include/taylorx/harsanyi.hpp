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

#ifndef TAYLORX_HARSANYI_HPP_
#define TAYLORX_HARSANYI_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "taylorx/model.hpp"
#include "taylorx/types.hpp"

namespace taylorx {

inline constexpr std::size_t kDefaultEnumerationLimit = 14;

// f(x_T) for every mask T over n variables, indexed by T's bitmask. Raises
// BudgetError when n exceeds max_variables. Evaluations are memoized: each
// coalition is evaluated exactly once.
Vector coalition_values(const Model& model, ConstVec x, ConstVec b,
                        std::size_t max_variables = kDefaultEnumerationLimit);

// Harsanyi dividends for every subset.
class HarsanyiTable {
 public:
  HarsanyiTable(std::size_t n, Vector dividends);

  // In-place Moebius inversion of coalition values.
  static HarsanyiTable from_values(std::size_t n, Vector values);

  std::size_t num_variables() const { return n_; }
  double dividend(VarSet s) const { return dividends_[s.mask()]; }
  const Vector& dividends() const { return dividends_; }
  // f(x_T) rebuilt as f(b) + sum over nonempty S subset of T of H(S).
  double coalition_value(VarSet t) const;

 private:
  std::size_t n_;
  Vector dividends_;
};

HarsanyiTable harsanyi(const Model& model, ConstVec x, ConstVec b,
                       std::size_t max_variables = kDefaultEnumerationLimit);

// CSV with header subset,size,dividend over nonempty subsets.
std::string to_csv(const HarsanyiTable& table);

// Per-subset comparison of the Harsanyi dividend with the Taylor effect of
// the same receptive field (generic independent effect for singletons).
struct DividendGap {
  VarSet subset;
  double dividend = 0.0;
  double taylor_effect = 0.0;
  double gap = 0.0;
};

struct DividendComparison {
  std::vector<DividendGap> subsets;
  double max_gap = 0.0;
  // |f(x) - f(b) - sum of dividends over nonempty S|
  double efficiency_gap = 0.0;
};

DividendComparison compare_dividends_with_taylor(
    const Model& model, ConstVec x, ConstVec b, int order,
    std::size_t max_variables = kDefaultEnumerationLimit);

}  // namespace taylorx

#endif  // TAYLORX_HARSANYI_HPP_
