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

#ifndef TAYLORX_METRICS_HPP_
#define TAYLORX_METRICS_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "taylorx/attribution.hpp"
#include "taylorx/model.hpp"
#include "taylorx/types.hpp"

namespace taylorx {

struct GridShape {
  std::size_t rows = 1;
  std::size_t cols = 1;
  std::size_t size() const { return rows * cols; }
  bool operator==(const GridShape&) const = default;
};

enum class PerturbationKind {
  // p = x on a random side x side square and 0 elsewhere, so x - p has the
  // square removed.
  kSquareRemoval,
  // p ~ N(0, sigma^2 I).
  kGaussian,
};

struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::kSquareRemoval;
  GridShape grid;
  std::size_t side = 2;
  double sigma = 0.1;
  std::size_t samples = 32;
  std::uint64_t seed = 0;
};

std::vector<Vector> draw_perturbations(ConstVec x,
                                       const PerturbationSpec& spec);

// E_p[(p . a - (f(x) - f(x - p)))^2], estimated over the drawn perturbations.
double infidelity(const Model& model, ConstVec x, ConstVec attribution,
                  const PerturbationSpec& spec);

// Indices of the m largest attributions. Ties go to the smaller index.
std::vector<std::size_t> top_m(ConstVec attribution, std::size_t m);

// |B cap M| / |B| with M the top-|B| attributions.
double bbox_accuracy(ConstVec attribution, VarSet box);

// Box size rule for bounding-box datasets: |B| < 33% of the input size.
bool box_eligible(std::size_t box_size, std::size_t input_size);

struct CorrelationRow {
  std::string model;
  MethodId method = MethodId::kGradInput;
  int principle_count = 0;
  std::string metric;
  double value = 0.0;
  // "ok", or the reason the method does not apply to the model.
  std::string status = "ok";
};

struct CorrelationOptions {
  std::string metric = "infidelity";  // or "bbox"
  PerturbationSpec perturbation;
  MethodConfig method;
  // Baseline for baseline-dependent methods, broadcast to every input.
  double baseline_value = 0.0;
};

// One row per (model, method) with the metric averaged over samples. For
// "bbox", boxes[s] is the planted box of samples[s].
std::vector<CorrelationRow> principle_correlation(
    const std::vector<Model>& models, const std::vector<Vector>& samples,
    const std::vector<VarSet>& boxes, const CorrelationOptions& options);

// CSV with header model,method,principle_count,metric,value,status
std::string to_csv(const std::vector<CorrelationRow>& rows);

}  // namespace taylorx

#endif  // TAYLORX_METRICS_HPP_
