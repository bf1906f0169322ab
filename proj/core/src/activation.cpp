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

#include "taylorx/activation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "taylorx/error.hpp"

namespace taylorx {
namespace {

double logistic(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  double e = std::exp(t);
  return e / (1.0 + e);
}

// Taylor coefficients of the sigmoid at t0. The k-th derivative is a
// polynomial P_k(s) in s = sigmoid(t0), with P_{k+1} = P_k'(s) (s - s^2).
Vector sigmoid_series(double t0, int order) {
  const double s = logistic(t0);
  Vector out(order + 1);
  std::vector<double> p = {0.0, 1.0};  // P_0(s) = s, coefficients by power
  double factorial = 1.0;
  for (int k = 0; k <= order; ++k) {
    double v = 0.0;
    for (std::size_t j = p.size(); j-- > 0;) v = v * s + p[j];
    if (k > 0) factorial *= k;
    out[k] = v / factorial;
    // derivative then multiply by (s - s^2)
    std::vector<double> dp(p.size() > 1 ? p.size() - 1 : 1, 0.0);
    for (std::size_t j = 1; j < p.size(); ++j) dp[j - 1] = p[j] * j;
    std::vector<double> next(dp.size() + 2, 0.0);
    for (std::size_t j = 0; j < dp.size(); ++j) {
      next[j + 1] += dp[j];
      next[j + 2] -= dp[j];
    }
    p = std::move(next);
  }
  return out;
}

}  // namespace

Activation Activation::parse(std::string_view name, double sharpness) {
  if (name == "identity" || name == "linear") return identity();
  if (name == "sigmoid") return sigmoid();
  if (name == "softplus") {
    if (!(sharpness > 0) || !std::isfinite(sharpness)) {
      throw Error("softplus sharpness must be positive");
    }
    return softplus(sharpness);
  }
  if (name == "relu") return relu();
  if (name == "cubic-sigmoid") return cubic_sigmoid();
  throw Error("unknown activation '" + std::string(name) + "'");
}

std::string Activation::name() const {
  switch (kind) {
    case ActivationKind::kIdentity:
      return "identity";
    case ActivationKind::kSigmoid:
      return "sigmoid";
    case ActivationKind::kSoftplus:
      return "softplus";
    case ActivationKind::kRelu:
      return "relu";
    case ActivationKind::kCubicSigmoid:
      return "cubic-sigmoid";
  }
  return "identity";
}

double Activation::value(double t) const {
  switch (kind) {
    case ActivationKind::kIdentity:
      return t;
    case ActivationKind::kSigmoid:
      return logistic(t);
    case ActivationKind::kSoftplus: {
      double u = sharpness * t;
      return (std::max(u, 0.0) + std::log1p(std::exp(-std::abs(u)))) /
             sharpness;
    }
    case ActivationKind::kRelu:
      return t > 0 ? t : 0.0;
    case ActivationKind::kCubicSigmoid:
      return 0.5 + t / 4.0 - t * t * t / 48.0;
  }
  return t;
}

double Activation::derivative(double t) const {
  switch (kind) {
    case ActivationKind::kIdentity:
      return 1.0;
    case ActivationKind::kSigmoid: {
      double s = logistic(t);
      return s * (1.0 - s);
    }
    case ActivationKind::kSoftplus:
      return logistic(sharpness * t);
    case ActivationKind::kRelu:
      if (t == 0.0) throw DomainError("relu derivative at its kink");
      return t > 0 ? 1.0 : 0.0;
    case ActivationKind::kCubicSigmoid:
      return 0.25 - t * t / 16.0;
  }
  return 1.0;
}

Vector Activation::series(double t0, int order) const {
  if (order < 0) throw Error("series order must be >= 0");
  Vector c(order + 1, 0.0);
  switch (kind) {
    case ActivationKind::kIdentity:
      c[0] = t0;
      if (order >= 1) c[1] = 1.0;
      return c;
    case ActivationKind::kSigmoid:
      return sigmoid_series(t0, order);
    case ActivationKind::kSoftplus: {
      c[0] = value(t0);
      if (order >= 1) {
        Vector s = sigmoid_series(sharpness * t0, order - 1);
        // f^(k) = beta^(k-1) sigma^(k-1)(beta t); c_k = f^(k)/k!
        // and s[k-1] = sigma^(k-1)/(k-1)!, so c_k = beta^(k-1) s[k-1] / k.
        double beta_pow = 1.0;
        for (int k = 1; k <= order; ++k) {
          c[k] = beta_pow * s[k - 1] / k;
          beta_pow *= sharpness;
        }
      }
      return c;
    }
    case ActivationKind::kRelu:
      if (t0 == 0.0) {
        throw DomainError("relu has no Taylor expansion at its kink");
      }
      if (t0 > 0) {
        c[0] = t0;
        if (order >= 1) c[1] = 1.0;
      }
      return c;
    case ActivationKind::kCubicSigmoid:
      c[0] = value(t0);
      if (order >= 1) c[1] = 0.25 - t0 * t0 / 16.0;
      if (order >= 2) c[2] = -t0 / 16.0;
      if (order >= 3) c[3] = -1.0 / 48.0;
      return c;
  }
  return c;
}

}  // namespace taylorx
