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

#ifndef TAYLORX_JET_HPP_
#define TAYLORX_JET_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "taylorx/activation.hpp"
#include "taylorx/model.hpp"
#include "taylorx/types.hpp"

namespace taylorx {

// Number of nonzero degree vectors of order <= K over n variables,
// C(n + K, K) - 1. Saturates at SIZE_MAX on overflow.
std::size_t count_terms(std::size_t n, int order);

// All exponent vectors of total degree <= order over n variables, in graded
// order: degree 0 first, then degree 1 as e_0..e_{n-1}, then higher degrees
// with exponents compared lexicographically in descending order.
class MonomialBasis {
 public:
  struct Product {
    std::uint32_t lhs;
    std::uint32_t rhs;
    std::uint32_t out;
  };

  // Raises BudgetError if the basis would exceed max_size entries.
  static std::shared_ptr<const MonomialBasis> make(std::size_t n, int order,
                                                   std::size_t max_size);

  std::size_t num_variables() const { return n_; }
  int order() const { return order_; }
  std::size_t size() const { return degrees_.size(); }

  std::span<const std::uint8_t> exponents(std::size_t index) const {
    return {exponents_.data() + index * n_, n_};
  }
  int degree(std::size_t index) const { return degrees_[index]; }
  const std::vector<Product>& products() const { return products_; }

 private:
  MonomialBasis() = default;

  std::size_t n_ = 0;
  int order_ = 0;
  std::vector<std::uint8_t> exponents_;
  std::vector<int> degrees_;
  std::vector<Product> products_;
};

// Truncated multivariate Taylor polynomial in displacement variables t,
// stored as one coefficient per basis monomial.
class Jet {
 public:
  explicit Jet(std::shared_ptr<const MonomialBasis> basis);

  static Jet constant(std::shared_ptr<const MonomialBasis> basis, double c);
  // value + t_i
  static Jet variable(std::shared_ptr<const MonomialBasis> basis,
                      std::size_t i, double value);

  const MonomialBasis& basis() const { return *basis_; }
  double constant_term() const { return coef_[0]; }
  std::span<const double> coefficients() const { return coef_; }
  double& operator[](std::size_t i) { return coef_[i]; }
  double operator[](std::size_t i) const { return coef_[i]; }

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double s);
  Jet& add_scaled(const Jet& o, double s);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(const Jet& a, const Jet& b);

  // sum_k series[k] * (self - self.constant_term())^k
  Jet compose(const Vector& series) const;
  Jet apply(const Activation& activation) const;

 private:
  std::shared_ptr<const MonomialBasis> basis_;
  Vector coef_;
};

// Jet of the model output when input i is b_i + t_i.
Jet evaluate_jet(const Model& model,
                 const std::shared_ptr<const MonomialBasis>& basis,
                 ConstVec at);

}  // namespace taylorx

#endif  // TAYLORX_JET_HPP_
