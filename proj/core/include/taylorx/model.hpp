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

#ifndef TAYLORX_MODEL_HPP_
#define TAYLORX_MODEL_HPP_

#include <array>
#include <cstddef>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "taylorx/activation.hpp"
#include "taylorx/types.hpp"

namespace taylorx {

// Row-major dense matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  Vector data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data[r * cols + c];
  }
  bool operator==(const Matrix&) const = default;
};

// One fully connected layer: out = activation(weights * in + bias).
// weights has shape (outputs x inputs).
struct DenseLayer {
  Matrix weights;
  Vector bias;
  Activation activation;

  std::size_t inputs() const { return weights.cols; }
  std::size_t outputs() const { return weights.rows; }
  bool operator==(const DenseLayer&) const = default;
};

// coefficient * prod x_i^e for (i, e) in powers. Powers are sorted by index
// and every exponent is >= 1.
struct Monomial {
  double coefficient = 0.0;
  std::vector<std::pair<std::size_t, int>> powers;

  int degree() const;
  bool operator==(const Monomial&) const = default;
};

struct Polynomial {
  std::size_t num_inputs = 0;
  double constant = 0.0;
  std::vector<Monomial> terms;

  int degree() const;
  bool operator==(const Polynomial&) const = default;
};

// Single-channel height x width input, `channels` 3x3 same-padded
// convolution maps, elementwise activation, global average pooling and a
// linear head producing a scalar.
struct ConvNetSpec {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 0;
  std::vector<std::array<double, 9>> kernels;  // [channel][ky * 3 + kx]
  Vector conv_bias;                            // per channel
  Activation activation = Activation::sigmoid();
  Vector head_weights;  // per channel
  double head_bias = 0.0;

  bool operator==(const ConvNetSpec&) const = default;
};

enum class ModelKind { kPolynomial, kMlp, kTinyCnn };

std::string to_string(ModelKind kind);

// Values of every layer for one input. activations[0] is the input and
// activations[l + 1] the output of layer l; preactivations[l] is the input
// of layer l's activation.
struct ForwardTrace {
  std::vector<Vector> activations;
  std::vector<Vector> preactivations;

  double output() const { return activations.back().front(); }
};

// A scalar-valued differentiable model.
class Model {
 public:
  static Model polynomial(Polynomial p);
  // b + sum_i c_i x_i + sum_{i<=j} c_ij x_i x_j, with quadratic given as
  // (i, j, c_ij) triples.
  static Model polynomial_deg2(
      std::size_t n, const Vector& linear,
      const std::vector<std::tuple<std::size_t, std::size_t, double>>&
          quadratic,
      double constant = 0.0);
  // The last layer must have exactly one output.
  static Model mlp(std::vector<DenseLayer> layers);
  static Model tiny_cnn(ConvNetSpec spec);

  ModelKind kind() const { return kind_; }
  std::size_t num_inputs() const { return num_inputs_; }

  double evaluate(ConstVec x) const;
  // Analytic reverse-mode gradient. Raises DomainError when a ReLU unit sits
  // exactly on its kink or a value is not finite.
  Vector gradient(ConstVec x) const;

  // Dense layer view. For a tiny CNN this is the exact two-layer lowering
  // (convolution as a sparse dense layer, pooling folded into the head).
  bool has_layers() const { return kind_ != ModelKind::kPolynomial; }
  const std::vector<DenseLayer>& layers() const;
  const Polynomial& poly() const;
  const ConvNetSpec& conv() const;

  ForwardTrace trace(ConstVec x) const;

  // Optional label carried through reports.
  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  // Mutable access for training. Resynchronizes derived state.
  void set_layers(std::vector<DenseLayer> layers);
  void set_conv(ConvNetSpec spec);

 private:
  Model() = default;
  void check_input(ConstVec x) const;

  ModelKind kind_ = ModelKind::kPolynomial;
  std::size_t num_inputs_ = 0;
  Polynomial poly_;
  ConvNetSpec conv_;
  std::vector<DenseLayer> layers_;
  std::string name_;
};

// Validates and runs a dense layer stack.
ForwardTrace forward(const std::vector<DenseLayer>& layers, ConstVec x);
// Gradient of the scalar output of a dense stack.
Vector layers_gradient(const std::vector<DenseLayer>& layers, ConstVec x);
// Lowers a conv spec to the equivalent dense stack.
std::vector<DenseLayer> lower_conv(const ConvNetSpec& spec);

// x_T: x on the kept variables, baseline elsewhere.
Vector mask(ConstVec x, VarSet keep, ConstVec baseline);
Vector mask(ConstVec x, const std::vector<std::size_t>& keep,
            ConstVec baseline);

// Throws DimensionError unless the sizes match.
void require_size(ConstVec v, std::size_t n, const char* what);

}  // namespace taylorx

#endif  // TAYLORX_MODEL_HPP_
