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

#include "taylorx/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "taylorx/error.hpp"

namespace taylorx {
namespace {

void check_finite(double v, const char* where) {
  if (!std::isfinite(v)) {
    throw DomainError(std::string("non-finite value in ") + where);
  }
}

double ipow(double x, int e) {
  double r = 1.0;
  for (int k = 0; k < e; ++k) r *= x;
  return r;
}

Polynomial normalize(Polynomial p) {
  for (Monomial& m : p.terms) {
    std::map<std::size_t, int> merged;
    for (auto [i, e] : m.powers) {
      if (i >= p.num_inputs) {
        throw DimensionError("monomial variable " + std::to_string(i) +
                             " outside " + std::to_string(p.num_inputs) +
                             " inputs");
      }
      if (e < 0) throw Error("negative monomial exponent");
      merged[i] += e;
    }
    m.powers.clear();
    for (auto [i, e] : merged) {
      if (e > 0) m.powers.emplace_back(i, e);
    }
    check_finite(m.coefficient, "polynomial coefficient");
  }
  // Constant monomials fold into the constant term.
  std::vector<Monomial> kept;
  for (Monomial& m : p.terms) {
    if (m.powers.empty()) {
      p.constant += m.coefficient;
    } else {
      kept.push_back(std::move(m));
    }
  }
  p.terms = std::move(kept);
  check_finite(p.constant, "polynomial constant");
  return p;
}

void validate_layers(const std::vector<DenseLayer>& layers) {
  if (layers.empty()) throw DimensionError("network has no layers");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const DenseLayer& layer = layers[l];
    if (layer.weights.data.size() != layer.weights.rows * layer.weights.cols ||
        layer.weights.rows == 0 || layer.weights.cols == 0) {
      throw DimensionError("layer " + std::to_string(l) +
                           " has a malformed weight matrix");
    }
    if (layer.bias.size() != layer.outputs()) {
      throw DimensionError("layer " + std::to_string(l) + " bias has " +
                           std::to_string(layer.bias.size()) +
                           " entries, expected " +
                           std::to_string(layer.outputs()));
    }
    if (l > 0 && layers[l - 1].outputs() != layer.inputs()) {
      throw DimensionError("layer " + std::to_string(l) + " expects " +
                           std::to_string(layer.inputs()) +
                           " inputs but the previous layer has " +
                           std::to_string(layers[l - 1].outputs()) +
                           " outputs");
    }
  }
  if (layers.back().outputs() != 1) {
    throw DimensionError("the last layer must have a single output");
  }
}

void validate_conv(const ConvNetSpec& s) {
  if (s.height == 0 || s.width == 0 || s.channels == 0) {
    throw DimensionError("tiny CNN needs positive height, width and channels");
  }
  if (s.kernels.size() != s.channels || s.conv_bias.size() != s.channels ||
      s.head_weights.size() != s.channels) {
    throw DimensionError(
        "tiny CNN kernels, biases and head weights must have one entry per "
        "channel");
  }
}

}  // namespace

int Monomial::degree() const {
  int d = 0;
  for (auto [i, e] : powers) d += e;
  return d;
}

int Polynomial::degree() const {
  int d = 0;
  for (const Monomial& m : terms) d = std::max(d, m.degree());
  return d;
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kPolynomial:
      return "polynomial";
    case ModelKind::kMlp:
      return "mlp";
    case ModelKind::kTinyCnn:
      return "tiny-cnn";
  }
  return "polynomial";
}

void require_size(ConstVec v, std::size_t n, const char* what) {
  if (v.size() != n) {
    throw DimensionError(std::string(what) + " has " +
                         std::to_string(v.size()) + " entries, expected " +
                         std::to_string(n));
  }
}

Model Model::polynomial(Polynomial p) {
  if (p.num_inputs == 0) throw DimensionError("polynomial needs inputs");
  Model m;
  m.kind_ = ModelKind::kPolynomial;
  m.num_inputs_ = p.num_inputs;
  m.poly_ = normalize(std::move(p));
  return m;
}

Model Model::polynomial_deg2(
    std::size_t n, const Vector& linear,
    const std::vector<std::tuple<std::size_t, std::size_t, double>>& quadratic,
    double constant) {
  if (!linear.empty()) require_size(linear, n, "linear coefficient vector");
  Polynomial p;
  p.num_inputs = n;
  p.constant = constant;
  for (std::size_t i = 0; i < linear.size(); ++i) {
    if (linear[i] != 0.0) p.terms.push_back({linear[i], {{i, 1}}});
  }
  for (auto [i, j, c] : quadratic) {
    if (i == j) {
      p.terms.push_back({c, {{i, 2}}});
    } else {
      p.terms.push_back({c, {{std::min(i, j), 1}, {std::max(i, j), 1}}});
    }
  }
  return polynomial(std::move(p));
}

Model Model::mlp(std::vector<DenseLayer> layers) {
  validate_layers(layers);
  Model m;
  m.kind_ = ModelKind::kMlp;
  m.num_inputs_ = layers.front().inputs();
  m.layers_ = std::move(layers);
  return m;
}

Model Model::tiny_cnn(ConvNetSpec spec) {
  validate_conv(spec);
  Model m;
  m.kind_ = ModelKind::kTinyCnn;
  m.num_inputs_ = spec.height * spec.width;
  m.layers_ = lower_conv(spec);
  m.conv_ = std::move(spec);
  return m;
}

void Model::set_layers(std::vector<DenseLayer> layers) {
  if (kind_ != ModelKind::kMlp) throw UnsupportedError("set_layers needs an MLP");
  validate_layers(layers);
  if (layers.front().inputs() != num_inputs_) {
    throw DimensionError("replacement layers change the input size");
  }
  layers_ = std::move(layers);
}

void Model::set_conv(ConvNetSpec spec) {
  if (kind_ != ModelKind::kTinyCnn) {
    throw UnsupportedError("set_conv needs a tiny CNN");
  }
  validate_conv(spec);
  layers_ = lower_conv(spec);
  conv_ = std::move(spec);
}

const std::vector<DenseLayer>& Model::layers() const {
  if (!has_layers()) {
    throw UnsupportedError("polynomial models have no layer structure");
  }
  return layers_;
}

const Polynomial& Model::poly() const {
  if (kind_ != ModelKind::kPolynomial) {
    throw UnsupportedError("model is not a polynomial");
  }
  return poly_;
}

const ConvNetSpec& Model::conv() const {
  if (kind_ != ModelKind::kTinyCnn) {
    throw UnsupportedError("model is not a tiny CNN");
  }
  return conv_;
}

void Model::check_input(ConstVec x) const {
  require_size(x, num_inputs_, "input");
  for (double v : x) check_finite(v, "model input");
}

double Model::evaluate(ConstVec x) const {
  check_input(x);
  if (kind_ == ModelKind::kPolynomial) {
    double y = poly_.constant;
    for (const Monomial& m : poly_.terms) {
      double t = m.coefficient;
      for (auto [i, e] : m.powers) t *= ipow(x[i], e);
      y += t;
    }
    check_finite(y, "polynomial output");
    return y;
  }
  return forward(layers_, x).output();
}

Vector Model::gradient(ConstVec x) const {
  check_input(x);
  if (kind_ == ModelKind::kPolynomial) {
    Vector g(num_inputs_, 0.0);
    for (const Monomial& m : poly_.terms) {
      for (std::size_t a = 0; a < m.powers.size(); ++a) {
        double t = m.coefficient * m.powers[a].second *
                   ipow(x[m.powers[a].first], m.powers[a].second - 1);
        for (std::size_t b = 0; b < m.powers.size(); ++b) {
          if (b != a) t *= ipow(x[m.powers[b].first], m.powers[b].second);
        }
        g[m.powers[a].first] += t;
      }
    }
    for (double v : g) check_finite(v, "polynomial gradient");
    return g;
  }
  return layers_gradient(layers_, x);
}

ForwardTrace Model::trace(ConstVec x) const {
  check_input(x);
  return forward(layers(), x);
}

ForwardTrace forward(const std::vector<DenseLayer>& layers, ConstVec x) {
  ForwardTrace t;
  t.activations.reserve(layers.size() + 1);
  t.preactivations.reserve(layers.size());
  t.activations.emplace_back(x.begin(), x.end());
  for (const DenseLayer& layer : layers) {
    const Vector& in = t.activations.back();
    require_size(in, layer.inputs(), "layer input");
    Vector h(layer.outputs());
    Vector a(layer.outputs());
    for (std::size_t j = 0; j < layer.outputs(); ++j) {
      double s = layer.bias[j];
      for (std::size_t i = 0; i < layer.inputs(); ++i) {
        s += layer.weights(j, i) * in[i];
      }
      check_finite(s, "pre-activation");
      h[j] = s;
      a[j] = layer.activation.value(s);
      check_finite(a[j], "activation");
    }
    t.preactivations.push_back(std::move(h));
    t.activations.push_back(std::move(a));
  }
  return t;
}

Vector layers_gradient(const std::vector<DenseLayer>& layers, ConstVec x) {
  ForwardTrace t = forward(layers, x);
  Vector delta = {1.0};
  for (std::size_t l = layers.size(); l-- > 0;) {
    const DenseLayer& layer = layers[l];
    for (std::size_t j = 0; j < layer.outputs(); ++j) {
      if (delta[j] == 0.0 && layer.activation.is_piecewise()) continue;
      delta[j] *= layer.activation.derivative(t.preactivations[l][j]);
    }
    Vector prev(layer.inputs(), 0.0);
    for (std::size_t j = 0; j < layer.outputs(); ++j) {
      if (delta[j] == 0.0) continue;
      for (std::size_t i = 0; i < layer.inputs(); ++i) {
        prev[i] += layer.weights(j, i) * delta[j];
      }
    }
    delta = std::move(prev);
  }
  for (double v : delta) check_finite(v, "gradient");
  return delta;
}

std::vector<DenseLayer> lower_conv(const ConvNetSpec& s) {
  validate_conv(s);
  const std::size_t hw = s.height * s.width;
  DenseLayer conv;
  conv.weights = Matrix(s.channels * hw, hw);
  conv.bias.assign(s.channels * hw, 0.0);
  conv.activation = s.activation;
  for (std::size_t k = 0; k < s.channels; ++k) {
    for (std::size_t r = 0; r < s.height; ++r) {
      for (std::size_t c = 0; c < s.width; ++c) {
        const std::size_t unit = k * hw + r * s.width + c;
        conv.bias[unit] = s.conv_bias[k];
        for (int ky = 0; ky < 3; ++ky) {
          for (int kx = 0; kx < 3; ++kx) {
            long rr = static_cast<long>(r) + ky - 1;
            long cc = static_cast<long>(c) + kx - 1;
            if (rr < 0 || cc < 0 || rr >= static_cast<long>(s.height) ||
                cc >= static_cast<long>(s.width)) {
              continue;
            }
            conv.weights(unit, rr * s.width + cc) = s.kernels[k][ky * 3 + kx];
          }
        }
      }
    }
  }
  DenseLayer head;
  head.weights = Matrix(1, s.channels * hw);
  head.bias = {s.head_bias};
  head.activation = Activation::identity();
  for (std::size_t k = 0; k < s.channels; ++k) {
    for (std::size_t p = 0; p < hw; ++p) {
      head.weights(0, k * hw + p) = s.head_weights[k] / static_cast<double>(hw);
    }
  }
  return {std::move(conv), std::move(head)};
}

Vector mask(ConstVec x, VarSet keep, ConstVec baseline) {
  require_size(baseline, x.size(), "baseline");
  Vector out(baseline.begin(), baseline.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (keep.contains(i)) out[i] = x[i];
  }
  return out;
}

Vector mask(ConstVec x, const std::vector<std::size_t>& keep,
            ConstVec baseline) {
  require_size(baseline, x.size(), "baseline");
  Vector out(baseline.begin(), baseline.end());
  for (std::size_t i : keep) {
    if (i >= x.size()) throw DimensionError("mask index out of range");
    out[i] = x[i];
  }
  return out;
}

}  // namespace taylorx
