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

#ifndef TAYLORX_ACTIVATION_HPP_
#define TAYLORX_ACTIVATION_HPP_

#include <string>
#include <string_view>

#include "taylorx/types.hpp"

namespace taylorx {

enum class ActivationKind {
  kIdentity,
  kSigmoid,
  // log(1 + exp(beta t)) / beta, beta = sharpness.
  kSoftplus,
  kRelu,
  // 1/2 + t/4 - t^3/48: the cubic truncation of the sigmoid around 0. A
  // polynomial surrogate on which third-order expansions are exact.
  kCubicSigmoid,
};

struct Activation {
  ActivationKind kind = ActivationKind::kIdentity;
  double sharpness = 1.0;

  static Activation identity() { return {}; }
  static Activation sigmoid() { return {ActivationKind::kSigmoid, 1.0}; }
  static Activation softplus(double beta = 1.0) {
    return {ActivationKind::kSoftplus, beta};
  }
  static Activation relu() { return {ActivationKind::kRelu, 1.0}; }
  static Activation cubic_sigmoid() {
    return {ActivationKind::kCubicSigmoid, 1.0};
  }

  // Accepts identity, sigmoid, softplus, relu, cubic-sigmoid.
  static Activation parse(std::string_view name, double sharpness = 1.0);
  std::string name() const;

  double value(double t) const;
  double derivative(double t) const;

  // Scaled derivatives c_k = f^(k)(t0) / k! for k = 0..order. For relu the
  // local affine piece is returned; t0 == 0 raises DomainError.
  Vector series(double t0, int order) const;

  bool is_polynomial() const {
    return kind == ActivationKind::kIdentity ||
           kind == ActivationKind::kCubicSigmoid;
  }
  bool is_piecewise() const { return kind == ActivationKind::kRelu; }

  bool operator==(const Activation&) const = default;
};

}  // namespace taylorx

#endif  // TAYLORX_ACTIVATION_HPP_
