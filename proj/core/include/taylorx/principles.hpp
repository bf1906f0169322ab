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

#ifndef TAYLORX_PRINCIPLES_HPP_
#define TAYLORX_PRINCIPLES_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "taylorx/attribution.hpp"
#include "taylorx/model.hpp"
#include "taylorx/taylor.hpp"
#include "taylorx/unification.hpp"

namespace taylorx {

enum class Principle {
  kLowApproximationError,
  kNoUnrelatedAllocation,
  kCompleteAllocation,
};

inline constexpr std::array<Principle, 3> kAllPrinciples = {
    Principle::kLowApproximationError, Principle::kNoUnrelatedAllocation,
    Principle::kCompleteAllocation};

std::string to_string(Principle p);

// Degree vectors and group structure the schema is probed on.
struct ProbeSet {
  std::size_t num_variables = 0;
  int order = 0;
  SchemaContext context;
  std::vector<DegreeVector> kappas;
};

// Every kappa of order 1..3 over four variables, N+ = {0, 1},
// patches {0, 1} and {2, 3}.
ProbeSet default_probes();

struct PrincipleVerdict {
  MethodId method = MethodId::kGradInput;
  std::array<bool, 3> satisfied{};
  std::array<std::string, 3> evidence;
  // Probe kappas no variable receives any part of.
  std::vector<DegreeVector> uncovered;
  // (variable, kappa) pairs with nonzero weight and i outside S_kappa.
  std::vector<std::pair<std::size_t, DegreeVector>> unrelated;
  // Covered kappas whose weights do not sum to one, with the sum.
  std::vector<std::pair<DegreeVector, double>> incomplete;

  bool satisfies(Principle p) const {
    return satisfied[static_cast<std::size_t>(p)];
  }
  int count() const;
};

// Raises Error when the probe set misses some receptive-field shape the
// checks rely on.
void validate_probes(const ProbeSet& probes);

PrincipleVerdict audit(MethodId method, const ProbeSet& probes);
std::vector<PrincipleVerdict> audit_all(const ProbeSet& probes);

// CSV with header method,low_approximation_error,no_unrelated_allocation,
// complete_allocation,count
std::string to_csv(const std::vector<PrincipleVerdict>& verdicts);

// A concrete model and input on which a method's attribution measurably
// breaks a principle.
struct Witness {
  MethodId method = MethodId::kGradInput;
  Principle principle = Principle::kLowApproximationError;
  std::string description;
  std::optional<Model> model;
  Vector x;
  Vector baseline;
  std::optional<DegreeVector> kappa;
  double magnitude = 0.0;
};

// Raises Error if the method satisfies the principle.
Witness witness(MethodId method, Principle principle);

}  // namespace taylorx

#endif  // TAYLORX_PRINCIPLES_HPP_
