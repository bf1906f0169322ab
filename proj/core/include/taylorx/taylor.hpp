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

#ifndef TAYLORX_TAYLOR_HPP_
#define TAYLORX_TAYLOR_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "taylorx/model.hpp"
#include "taylorx/types.hpp"

namespace taylorx {

// Multi-index kappa, stored sparsely as (variable, exponent) pairs sorted by
// variable with every exponent >= 1.
class DegreeVector {
 public:
  using Entry = std::pair<std::uint32_t, std::uint32_t>;

  DegreeVector() = default;
  // Sorts, merges duplicates and drops zero exponents.
  explicit DegreeVector(std::vector<Entry> entries);
  static DegreeVector unit(std::size_t i);
  static DegreeVector from_dense(std::span<const std::uint8_t> exponents);
  static DegreeVector from_dense(const std::vector<int>& exponents);
  // Parses the to_string form, e.g. "0:1;2:2".
  static DegreeVector parse(const std::string& text);

  const std::vector<Entry>& entries() const { return entries_; }
  int order() const;
  int exponent(std::size_t i) const;
  // S_kappa, the variables with a positive exponent.
  VarSet receptive_field() const;
  std::size_t field_size() const { return entries_.size(); }
  // sum of exponents over variables in `group`.
  int order_within(VarSet group) const;
  bool is_unit(std::size_t i) const;
  double factorial() const;  // prod kappa_i!

  std::string to_string() const;

  bool operator==(const DegreeVector&) const = default;
  auto operator<=>(const DegreeVector&) const = default;

 private:
  std::vector<Entry> entries_;
};

// I(kappa) = coefficient * derivative * displacement, where coefficient is
// 1/kappa!, derivative the mixed partial at the expansion point, and
// displacement prod (x_i - b_i)^kappa_i.
struct TaylorTerm {
  DegreeVector kappa;
  double coefficient = 0.0;
  double derivative = 0.0;
  double displacement = 0.0;
  double value = 0.0;
};

struct ExpandOptions {
  std::size_t max_terms = 250000;
};

// Every term of order 1..K of f expanded at b and evaluated at x.
class TaylorDecomposition {
 public:
  TaylorDecomposition(Vector sample, Vector expansion_point, int order,
                      double f_sample, double f_expansion,
                      std::vector<TaylorTerm> terms, bool piecewise_local);

  std::size_t num_variables() const { return sample_.size(); }
  int order() const { return order_; }
  const Vector& sample() const { return sample_; }
  const Vector& expansion_point() const { return expansion_; }
  double f_sample() const { return f_sample_; }
  double f_expansion() const { return f_expansion_; }
  const std::vector<TaylorTerm>& terms() const { return terms_; }
  // True when a ReLU was expanded through its local affine piece.
  bool piecewise_local() const { return piecewise_; }

  double term_sum() const;
  // f(x) - f(b) - sum of all retained terms.
  double residual() const;

  const TaylorTerm* find(const DegreeVector& kappa) const;
  // Independent effect phi(kappa); kappa must touch exactly one variable.
  double independent_effect(const DegreeVector& kappa) const;
  // psi(i): sum of independent effects of variable i over every order.
  double generic_independent_effect(std::size_t i) const;
  // J(S): sum of I(kappa) over kappa with receptive field exactly S, |S|>=2.
  double interaction_effect(VarSet s) const;
  // Sum of I(kappa) over kappa with receptive field exactly s (any size).
  double field_effect(VarSet s) const;

 private:
  Vector sample_;
  Vector expansion_;
  int order_;
  double f_sample_;
  double f_expansion_;
  std::vector<TaylorTerm> terms_;
  bool piecewise_;
};

// Expands f at b and evaluates the terms at x. Raises BudgetError when
// count_terms(n, order) exceeds options.max_terms.
TaylorDecomposition expand(const Model& model, ConstVec x, ConstVec b,
                           int order, const ExpandOptions& options = {});

// CSV with header kappa,order,field,coefficient,derivative,displacement,value
std::string to_csv(const TaylorDecomposition& decomposition);

}  // namespace taylorx

#endif  // TAYLORX_TAYLOR_HPP_
