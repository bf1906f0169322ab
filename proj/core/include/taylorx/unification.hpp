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

#ifndef TAYLORX_UNIFICATION_HPP_
#define TAYLORX_UNIFICATION_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "taylorx/attribution.hpp"
#include "taylorx/model.hpp"
#include "taylorx/taylor.hpp"
#include "taylorx/types.hpp"

namespace taylorx {

// Extra structure some allocation rules depend on.
struct SchemaContext {
  // Occlusion-patch groups.
  Partition patches;
  // Variables in the positive group N+; the rest form N-.
  VarSet positive;
  // Per-variable contributions z_i (used for the effects of terms confined
  // to the opposite group under LRP-alpha-beta).
  Vector z;
  double alpha = 1.0;
  double beta = 0.0;
};

// Where the decomposition a schema consumes is anchored. kSample schemas
// read a decomposition expanded at the sample x and evaluated at the zero
// input, and allocate the negated first-order terms.
enum class Anchor { kBaseline, kSample };

// w(i, kappa): the fraction of I(kappa) a method hands to variable i.
class AllocationSchema {
 public:
  MethodId method() const { return method_; }
  Anchor anchor() const { return anchor_; }
  const std::string& rule() const { return rule_; }
  bool needs_patches() const;
  bool needs_groups() const;

  double weight(std::size_t i, const DegreeVector& kappa,
                const SchemaContext& context) const;

 private:
  friend AllocationSchema schema_for(MethodId method);
  MethodId method_ = MethodId::kGradInput;
  Anchor anchor_ = Anchor::kBaseline;
  std::string rule_;
};

AllocationSchema schema_for(MethodId method);

// a_i = sum_kappa w(i, kappa) I(kappa) (negated for kSample schemas).
Vector reconstruct(const AllocationSchema& schema,
                   const TaylorDecomposition& decomposition,
                   const SchemaContext& context = {});

// Group context of a single dense unit for the LRP-alpha-beta, Deep Taylor
// and RevealCancel schemas. z_i = W_i x_i for the LRP rules (zero
// reference) and W_i (x_i - ref_i) for RevealCancel.
SchemaContext unit_context(MethodId method, const DenseLayer& unit,
                           ConstVec x, ConstVec reference, double alpha = 1.0,
                           double beta = 0.0);

struct FitOptions {
  int order = 2;
  // Per-sample baseline b = x + N(0, baseline_sigma^2 I).
  double baseline_sigma = 0.1;
  std::uint64_t seed = 0;
  MethodConfig method;
};

struct FitReport {
  MethodId method = MethodId::kGradInput;
  int order = 0;
  // mean ||a - a*|| / ||a*|| over samples, in percent.
  double error_percent = 0.0;
  Vector per_sample;
  // Samples whose actual attribution has zero norm; not averaged in.
  std::size_t skipped = 0;
};

// Baseline used for sample `index` in fitting runs.
Vector fit_baseline(ConstVec x, const FitOptions& options, std::size_t index);

// Compares the method's attribution with the reconstruction from an
// order-K expansion. Back-propagation methods and Grad-CAM raise
// UnsupportedError.
FitReport fitting_error(MethodId method, const Model& model,
                        const std::vector<Vector>& samples,
                        const FitOptions& options);

struct IdentityCheck {
  std::string id;
  std::string statement;
  double residual = 0.0;
  double tolerance = 0.0;
  std::size_t cases = 0;
  bool passed = false;
  bool skipped = false;
};

struct IdentityLedger {
  std::vector<IdentityCheck> checks;
  bool all_passed() const;
};

struct VerifyOptions {
  std::size_t cases_per_model = 3;
  std::uint64_t seed = 0;
  double baseline_sigma = 0.5;
};

// Runs every applicable attribution identity over the model family:
// polynomials for the perturbation and path methods, ReLU networks for
// LRP-epsilon, tiny CNNs for Grad-CAM, and single units extracted from the
// first layer of each network for the single-module rules.
IdentityLedger verify_identities(const std::vector<Model>& family,
                                 const VerifyOptions& options);

}  // namespace taylorx

#endif  // TAYLORX_UNIFICATION_HPP_
