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

#ifndef TAYLORX_MODEL_IO_HPP_
#define TAYLORX_MODEL_IO_HPP_

#include <string>
#include <string_view>

#include "taylorx/model.hpp"

namespace taylorx {

// Text format, one entry per line, '#' starts a comment:
//
//   [meta]        kind = polynomial | mlp | tiny-cnn, inputs = n,
//                 name = label (optional)
//   [poly]        constant = c, linear = c_0 ... c_{n-1},
//                 and i,j,c lines for the x_i x_j coefficients
//   [monomial]    c ; i:e j:e ...   (one general term per line)
//   [layer L]     activation = name, sharpness = s (softplus),
//                 row = w_0 ... (one per output unit), bias = s_0 ...
//   [conv K]      row = a b c (three rows), bias = s
//   [net]         height, width, channels, activation, sharpness
//   [head]        weights = v_0 ..., bias = c
//
// Doubles are written with 17 significant digits so a round trip is exact.
std::string serialize_model(const Model& model);

// Raises ParseError naming the line and field on malformed input.
Model parse_model(std::string_view text, const std::string& source = "model");

Model load_model(const std::string& path);
void save_model(const Model& model, const std::string& path);

}  // namespace taylorx

#endif  // TAYLORX_MODEL_IO_HPP_
