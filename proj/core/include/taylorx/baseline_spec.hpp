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

#ifndef TAYLORX_BASELINE_SPEC_HPP_
#define TAYLORX_BASELINE_SPEC_HPP_

#include <cstddef>
#include <cstdint>
#include <string>

#include "taylorx/types.hpp"

namespace taylorx {

// fixed:<file> | scalar:<v> | gauss:<sigma>:<seed>
// gauss draws b = x + N(0, sigma^2 I) independently for every sample index.
struct BaselineSpec {
  enum class Kind { kFixed, kScalar, kGauss };
  Kind kind = Kind::kScalar;
  std::string text;
  Vector fixed;
  double scalar = 0.0;
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

// Raises ConfigError. fixed: reads whitespace or comma separated numbers.
BaselineSpec parse_baseline_spec(const std::string& text);

Vector resolve_baseline(const BaselineSpec& spec, ConstVec x,
                        std::size_t sample_index);

// Reads one vector per non-empty, non-comment line.
std::vector<Vector> read_vectors(const std::string& path);

}  // namespace taylorx

#endif  // TAYLORX_BASELINE_SPEC_HPP_
