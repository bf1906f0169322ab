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

#include "taylorx/harsanyi.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>

#include "taylorx/error.hpp"
#include "taylorx/parallel.hpp"
#include "taylorx/taylor.hpp"

namespace taylorx {

Vector coalition_values(const Model& model, ConstVec x, ConstVec b,
                        std::size_t max_variables) {
  const std::size_t n = model.num_inputs();
  require_size(x, n, "sample");
  require_size(b, n, "baseline");
  if (n > max_variables || n >= 63) {
    throw BudgetError("exhaustive enumeration over " + std::to_string(n) +
                      " variables exceeds the limit of " +
                      std::to_string(max_variables));
  }
  const std::size_t count = std::size_t{1} << n;
  Vector values(count);
  parallel_for(count, [&](std::size_t m) {
    values[m] = model.evaluate(mask(x, VarSet(m), b));
  });
  return values;
}

HarsanyiTable::HarsanyiTable(std::size_t n, Vector dividends)
    : n_(n), dividends_(std::move(dividends)) {
  if (dividends_.size() != (std::size_t{1} << n_)) {
    throw DimensionError("dividend table must have 2^n entries");
  }
}

HarsanyiTable HarsanyiTable::from_values(std::size_t n, Vector values) {
  if (values.size() != (std::size_t{1} << n)) {
    throw DimensionError("coalition table must have 2^n entries");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t m = 0; m < values.size(); ++m) {
      if (m & bit) values[m] -= values[m ^ bit];
    }
  }
  return HarsanyiTable(n, std::move(values));
}

double HarsanyiTable::coalition_value(VarSet t) const {
  const std::uint64_t full = t.mask();
  double sum = dividends_[0];
  for (std::uint64_t s = full; s != 0; s = (s - 1) & full) {
    sum += dividends_[s];
  }
  return sum;
}

HarsanyiTable harsanyi(const Model& model, ConstVec x, ConstVec b,
                       std::size_t max_variables) {
  return HarsanyiTable::from_values(
      model.num_inputs(), coalition_values(model, x, b, max_variables));
}

std::string to_csv(const HarsanyiTable& table) {
  std::ostringstream out;
  out.precision(17);
  out << "subset,size,dividend\n";
  for (std::size_t m = 1; m < table.dividends().size(); ++m) {
    VarSet s(m);
    std::string name = s.to_string();
    for (char& c : name) {
      if (c == ',') c = ' ';
    }
    out << name << ',' << s.size() << ',' << table.dividends()[m] << '\n';
  }
  return out.str();
}

DividendComparison compare_dividends_with_taylor(const Model& model, ConstVec x,
                                                 ConstVec b, int order,
                                                 std::size_t max_variables) {
  HarsanyiTable table = harsanyi(model, x, b, max_variables);
  TaylorDecomposition d = expand(model, x, b, order);
  Vector effect(table.dividends().size(), 0.0);
  for (const TaylorTerm& t : d.terms()) {
    effect[t.kappa.receptive_field().mask()] += t.value;
  }
  DividendComparison out;
  double total = 0.0;
  for (std::size_t m = 1; m < effect.size(); ++m) {
    DividendGap g;
    g.subset = VarSet(m);
    g.dividend = table.dividends()[m];
    g.taylor_effect = effect[m];
    g.gap = std::abs(g.dividend - g.taylor_effect);
    out.max_gap = std::max(out.max_gap, g.gap);
    total += g.dividend;
    out.subsets.push_back(g);
  }
  out.efficiency_gap = std::abs(d.f_sample() - d.f_expansion() - total);
  return out;
}

}  // namespace taylorx
