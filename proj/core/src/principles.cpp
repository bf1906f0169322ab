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

#include "taylorx/principles.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "taylorx/backprop.hpp"
#include "taylorx/error.hpp"
#include "taylorx/gradcam.hpp"

namespace taylorx {
namespace {

constexpr double kWeightTolerance = 1e-12;

void all_kappas(std::size_t n, int order, std::vector<int>& cur,
                std::size_t pos, int left, std::vector<DegreeVector>& out) {
  if (pos == n) {
    if (left != order) out.push_back(DegreeVector::from_dense(cur));
    return;
  }
  for (int e = 0; e <= left; ++e) {
    cur[pos] = e;
    all_kappas(n, order, cur, pos + 1, left - e, out);
  }
  cur[pos] = 0;
}

// sum over kappa with i in S_kappa of w(i, kappa) I(kappa): the part of an
// attribution explained by terms the variable takes part in.
double related_part(const AllocationSchema& schema,
                    const TaylorDecomposition& d, const SchemaContext& ctx,
                    std::size_t i) {
  double s = 0.0;
  for (const TaylorTerm& t : d.terms()) {
    if (t.kappa.receptive_field().contains(i)) {
      s += schema.weight(i, t.kappa, ctx) * t.value;
    }
  }
  return s;
}

double sum(const Vector& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

Witness first_order_witness(MethodId method) {
  Witness w;
  w.method = method;
  w.principle = Principle::kLowApproximationError;
  if (method == MethodId::kGradCam) {
    ConvFeatureStack stack;
    stack.height = 1;
    stack.width = 2;
    stack.maps = {{1.0, 2.0}};
    stack.head_weights = {4.0};
    stack.head_activation = Activation::sigmoid();
    GradCamMaps maps = grad_cam_unchecked(stack);
    ConvFeatureStack off = stack;
    off.maps = {{0.0, 0.0}};
    const double change = stack.output() - off.output();
    w.x = stack.maps[0];
    w.baseline = off.maps[0];
    w.magnitude = std::abs(change - sum(maps.pre_relu));
    std::ostringstream os;
    os << "sigmoid head over a 1x2 feature map: output change " << change
       << " vs first-order total " << sum(maps.pre_relu);
    w.description = os.str();
    return w;
  }
  Model m = [&] {
    if (method == MethodId::kLrpEpsilon) {
      DenseLayer hidden{Matrix(1, 1, 1.0), {-0.5}, Activation::relu()};
      DenseLayer out{Matrix(1, 1, 1.0), {0.0}, Activation::identity()};
      return Model::mlp({hidden, out});
    }
    return Model::polynomial_deg2(2, {1.0, 0.0}, {{0, 1, 1.0}});
  }();
  w.x = method == MethodId::kLrpEpsilon ? Vector{1.0} : Vector{1.0, 1.0};
  w.baseline.assign(w.x.size(), 0.0);
  Vector a = method == MethodId::kLrpEpsilon ? lrp_epsilon(m, w.x).values
                                             : grad_input(m, w.x).values;
  const double change = m.evaluate(w.x) - m.evaluate(w.baseline);
  w.magnitude = std::abs(change - sum(a));
  if (method != MethodId::kLrpEpsilon) {
    w.kappa = DegreeVector({{0, 1}, {1, 1}});
  }
  std::ostringstream os;
  os << "output change " << change << " vs attribution total " << sum(a)
     << "; the remainder is carried by terms beyond first order";
  w.description = os.str();
  w.model = std::move(m);
  return w;
}

Witness overlap_witness(MethodId method, Principle p) {
  Witness w;
  w.method = method;
  w.principle = p;
  if (method == MethodId::kOcclusionPatch) {
    // Patches {0,1} and {2,3}.
    Polynomial poly;
    poly.num_inputs = 4;
    poly.terms.push_back({1.0, {{0, 1}}});
    if (p == Principle::kNoUnrelatedAllocation) {
      poly.terms.push_back({1.0, {{2, 1}, {3, 1}}});
    }
    Model m = Model::polynomial(poly);
    w.x = {1.0, 1.0, 1.0, 1.0};
    w.baseline.assign(4, 0.0);
    Partition patches = {VarSet{0, 1}, VarSet{2, 3}};
    Vector a = occlusion_patch(m, w.x, w.baseline, patches).values;
    w.kappa = DegreeVector::unit(0);
    if (p == Principle::kNoUnrelatedAllocation) {
      // x_1 does not appear in f.
      w.magnitude = std::abs(a[1]);
      w.description = "x1 is absent from f yet receives " +
                      std::to_string(a[1]) + " through its patch";
    } else {
      const double change = m.evaluate(w.x) - m.evaluate(w.baseline);
      w.magnitude = std::abs(sum(a) - change);
      w.description = "the single-variable term is credited to both patch "
                      "members: total " +
                      std::to_string(sum(a)) + " vs change " +
                      std::to_string(change);
    }
    w.model = std::move(m);
    return w;
  }
  Model m = Model::polynomial_deg2(2, {}, {{0, 1, 1.0}});
  w.x = {1.0, 1.0};
  w.baseline = {0.0, 0.0};
  Vector a = method == MethodId::kOcclusion1
                 ? occlusion_1(m, w.x, w.baseline).values
                 : prediction_difference(m, w.x, 0.0, 0.0, 1, 0).values;
  const double change = m.evaluate(w.x) - m.evaluate(w.baseline);
  w.magnitude = std::abs(sum(a) - change);
  w.kappa = DegreeVector({{0, 1}, {1, 1}});
  w.description = "the interaction x0 x1 is credited in full to both "
                  "variables: total " +
                  std::to_string(sum(a)) + " vs change " +
                  std::to_string(change);
  w.model = std::move(m);
  return w;
}

Witness group_witness(MethodId method) {
  Witness w;
  w.method = method;
  w.principle = Principle::kNoUnrelatedAllocation;
  const double alpha = method == MethodId::kDeepTaylor ? 1.0 : 0.75;
  const double beta = method == MethodId::kDeepTaylor ? 0.0 : 0.25;
  DenseLayer unit;
  unit.weights = Matrix(1, 3);
  unit.weights(0, 0) = 1.0;
  unit.weights(0, 1) = 1.0;
  unit.weights(0, 2) = -1.0;
  unit.bias = {0.0};
  unit.activation = Activation::cubic_sigmoid();
  Model m = Model::mlp({unit});
  w.x = {1.0, 0.5, 1.0};
  w.baseline = {0.0, 0.0, 0.0};
  BackpropOptions o;
  o.alpha = alpha;
  o.beta = beta;
  o.output_relevance = m.evaluate(w.x) - m.evaluate(w.baseline);
  Vector a = backpropagate(method, m, w.x, w.baseline, o).values;
  SchemaContext ctx = unit_context(method, m.layers().front(), w.x, w.baseline,
                                   alpha, beta);
  const TaylorDecomposition d = expand(m, w.x, w.baseline, 3);
  const double related = related_part(schema_for(method), d, ctx, 0);
  w.magnitude = std::abs(a[0] - related);
  w.kappa = DegreeVector::unit(2);
  std::ostringstream os;
  os << "x0 (positive group) receives " << a[0] - related
     << " from terms in x2 alone (negative group)";
  w.description = os.str();
  w.model = std::move(m);
  return w;
}

}  // namespace

std::string to_string(Principle p) {
  switch (p) {
    case Principle::kLowApproximationError:
      return "low_approximation_error";
    case Principle::kNoUnrelatedAllocation:
      return "no_unrelated_allocation";
    case Principle::kCompleteAllocation:
      return "complete_allocation";
  }
  return "unknown";
}

int PrincipleVerdict::count() const {
  int c = 0;
  for (bool s : satisfied) c += s ? 1 : 0;
  return c;
}

ProbeSet default_probes() {
  ProbeSet p;
  p.num_variables = 4;
  p.order = 3;
  p.context.patches = {VarSet{0, 1}, VarSet{2, 3}};
  p.context.positive = VarSet{0, 1};
  p.context.z = {0.8, 0.5, -0.6, -0.3};
  // alpha + beta = 1 keeps the two group shares summing to one.
  p.context.alpha = 0.75;
  p.context.beta = 0.25;
  std::vector<int> cur(p.num_variables, 0);
  all_kappas(p.num_variables, p.order, cur, 0, p.order, p.kappas);
  std::stable_sort(p.kappas.begin(), p.kappas.end(),
                   [](const DegreeVector& a, const DegreeVector& b) {
                     return a.order() < b.order();
                   });
  return p;
}

void validate_probes(const ProbeSet& probes) {
  const std::size_t n = probes.num_variables;
  if (n < 2) throw Error("probe set needs at least two variables");
  if (probes.context.z.size() != n) {
    throw Error("probe context needs z for every variable");
  }
  validate_partition(probes.context.patches, n);
  const VarSet all = VarSet::full(n);
  const VarSet pos = probes.context.positive;
  const VarSet neg = VarSet(all.mask() & ~pos.mask());
  if (pos.empty() || neg.empty()) {
    throw Error("insufficient probe coverage: both groups must be nonempty");
  }
  bool pos_only = false, neg_only = false, mixed = false, higher = false;
  bool cross_patch = false, unit = false;
  for (const DegreeVector& k : probes.kappas) {
    const VarSet f = k.receptive_field();
    if (!f.subset_of(all)) throw Error("probe kappa outside the variables");
    pos_only = pos_only || f.subset_of(pos);
    neg_only = neg_only || f.subset_of(neg);
    mixed = mixed || (f.intersects(pos) && f.intersects(neg));
    higher = higher || k.order() >= 2;
    unit = unit || k.order() == 1;
    std::size_t touched = 0;
    for (const VarSet& g : probes.context.patches) {
      if (f.intersects(g)) ++touched;
    }
    cross_patch = cross_patch || touched >= 2;
  }
  std::string missing;
  if (!unit) missing += " first-order terms;";
  if (!higher) missing += " higher-order terms;";
  if (!pos_only) missing += " terms confined to N+;";
  if (!neg_only) missing += " terms confined to N-;";
  if (!mixed) missing += " terms spanning both groups;";
  if (!cross_patch) missing += " terms spanning two patches;";
  if (!missing.empty()) {
    throw Error("insufficient probe coverage, missing:" + missing);
  }
}

PrincipleVerdict audit(MethodId method, const ProbeSet& probes) {
  validate_probes(probes);
  const AllocationSchema schema = schema_for(method);
  PrincipleVerdict v;
  v.method = method;
  std::size_t covered_higher = 0;
  for (const DegreeVector& k : probes.kappas) {
    const VarSet field = k.receptive_field();
    double total = 0.0;
    bool covered = false;
    for (std::size_t i = 0; i < probes.num_variables; ++i) {
      const double w = schema.weight(i, k, probes.context);
      if (std::abs(w) <= kWeightTolerance) continue;
      covered = true;
      total += w;
      if (!field.contains(i)) v.unrelated.emplace_back(i, k);
    }
    if (!covered) {
      v.uncovered.push_back(k);
      continue;
    }
    if (k.order() >= 2) ++covered_higher;
    if (std::abs(total - 1.0) > kWeightTolerance) {
      v.incomplete.emplace_back(k, total);
    }
  }
  v.satisfied = {v.uncovered.empty(), v.unrelated.empty(),
                 v.incomplete.empty()};
  {
    std::ostringstream os;
    if (v.uncovered.empty()) {
      os << "every one of " << probes.kappas.size()
         << " probe terms up to order " << probes.order << " is allocated";
    } else {
      os << v.uncovered.size() << " of " << probes.kappas.size()
         << " probe terms are never allocated (" << covered_higher
         << " higher-order terms covered), e.g. "
         << v.uncovered.front().to_string();
    }
    v.evidence[0] = os.str();
  }
  {
    std::ostringstream os;
    if (v.unrelated.empty()) {
      os << "no variable outside a term's receptive field gets a share";
    } else {
      os << v.unrelated.size() << " (variable, term) pairs share with an "
         << "outside variable, e.g. x" << v.unrelated.front().first
         << " gets part of " << v.unrelated.front().second.to_string();
    }
    v.evidence[1] = os.str();
  }
  {
    std::ostringstream os;
    if (v.incomplete.empty()) {
      os << "weights of every allocated term sum to one";
    } else {
      os << v.incomplete.size() << " allocated terms have weights summing "
         << "away from one, e.g. " << v.incomplete.front().first.to_string()
         << " sums to " << v.incomplete.front().second;
    }
    v.evidence[2] = os.str();
  }
  return v;
}

std::vector<PrincipleVerdict> audit_all(const ProbeSet& probes) {
  std::vector<PrincipleVerdict> out;
  for (MethodId m : all_methods()) out.push_back(audit(m, probes));
  return out;
}

std::string to_csv(const std::vector<PrincipleVerdict>& verdicts) {
  std::ostringstream os;
  os << "method";
  for (Principle p : kAllPrinciples) os << ',' << to_string(p);
  os << ",count\n";
  for (const PrincipleVerdict& v : verdicts) {
    os << method_name(v.method);
    for (bool s : v.satisfied) os << ',' << (s ? 1 : 0);
    os << ',' << v.count() << '\n';
  }
  return os.str();
}

Witness witness(MethodId method, Principle principle) {
  const PrincipleVerdict v = audit(method, default_probes());
  if (v.satisfies(principle)) {
    throw Error(method_name(method) + " satisfies " + to_string(principle) +
                "; there is no violation to witness");
  }
  switch (principle) {
    case Principle::kLowApproximationError:
      return first_order_witness(method);
    case Principle::kNoUnrelatedAllocation:
      if (method == MethodId::kOcclusionPatch) {
        return overlap_witness(method, principle);
      }
      return group_witness(method);
    case Principle::kCompleteAllocation:
      return overlap_witness(method, principle);
  }
  throw Error("unknown principle");
}

}  // namespace taylorx
