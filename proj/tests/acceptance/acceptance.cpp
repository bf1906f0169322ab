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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails. Tolerances are pinned below.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "taylorx/attribution.hpp"
#include "taylorx/backprop.hpp"
#include "taylorx/datasets.hpp"
#include "taylorx/harsanyi.hpp"
#include "taylorx/metrics.hpp"
#include "taylorx/principles.hpp"
#include "taylorx/random.hpp"
#include "taylorx/training.hpp"
#include "taylorx/unification.hpp"

namespace tx = taylorx;
using tx::MethodId;
using tx::Model;
using tx::Vector;

namespace {

constexpr double kExactRelative = 1e-9;      // criterion 1
constexpr double kExactSeconds = 60.0;       // criterion 1
constexpr double kQuadraturePercent = 0.2;   // criterion 2
constexpr std::size_t kQuadratureSteps = 1000;
constexpr double kSmoothPercent = 10.0;      // criterion 3
constexpr double kSmoothSeconds = 600.0;     // criterion 3
constexpr double kDividendGap = 1e-9;        // criterion 4
constexpr double kEfficiencyGap = 1e-9;      // criterion 4, scaled by max(1, |f|)
constexpr double kShapleyGap = 1e-9;         // criterion 5
constexpr double kLrpRelative = 1e-6;        // criterion 6
constexpr double kKinkMargin = 1e-3;         // criterion 6
constexpr double kRescaleRelative = 1e-5;    // criterion 7, midpoint m = 300
constexpr double kDeepShapGap = 1e-9;        // criterion 7
constexpr double kWitnessFloor = 1e-6;       // criterion 8
constexpr double kInfidelityBound = 1e-20;   // criterion 9

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double norm(const Vector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double max_abs_diff(const Vector& a, const Vector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

double relative_diff(const Vector& a, const Vector& ref) {
  Vector d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - ref[i];
  const double r = norm(ref);
  return r == 0.0 ? norm(d) : norm(d) / r;
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

Vector sample_baseline(const Vector& x, double sigma, std::uint64_t seed,
                       std::size_t index) {
  auto rng = tx::make_engine(seed, "acceptance_baseline", index);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector b = x;
  for (double& v : b) v += sigma * normal(rng);
  return b;
}

std::vector<Model> polynomial_suite() {
  std::vector<Model> out;
  for (std::size_t k = 0; k < 20; ++k) {
    const std::size_t n = 2 + k % 7;  // 2..8
    out.push_back(tx::random_polynomial_deg2(n, 1000 + k));
  }
  return out;
}

std::vector<Vector> suite_samples(const Model& m, std::size_t k) {
  return tx::gaussian_samples(m.num_inputs(), 8, 2000 + k);
}

tx::FitOptions fit_options(int order, std::uint64_t seed) {
  tx::FitOptions o;
  o.order = order;
  o.baseline_sigma = 0.1;
  o.seed = seed;
  return o;
}

// 1. Exact unification on degree-2 polynomials.
Outcome criterion1() {
  const auto t0 = Clock::now();
  const std::array<MethodId, 5> methods = {
      MethodId::kGradInput, MethodId::kOcclusion1, MethodId::kOcclusionPatch,
      MethodId::kPredictionDifference, MethodId::kShapley};
  const std::vector<Model> suite = polynomial_suite();
  double worst = 0.0;
  std::string worst_method;
  for (std::size_t k = 0; k < suite.size(); ++k) {
    const auto samples = suite_samples(suite[k], k);
    for (MethodId m : methods) {
      tx::FitOptions o = fit_options(2, 3000 + k);
      o.method.sigma = 0.0;  // point-mass baseline distribution
      o.method.samples = 4;
      const double e = tx::fitting_error(m, suite[k], samples, o).error_percent / 100.0;
      if (e > worst || worst_method.empty()) {
        worst = e;
        worst_method = tx::method_name(m);
      }
    }
  }
  const double elapsed = seconds_since(t0);
  Outcome o;
  o.pass = worst <= kExactRelative && elapsed < kExactSeconds;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "max relative E = %.3g (%s) <= %.0e, %.1fs < %.0fs",
                worst, worst_method.c_str(), kExactRelative, elapsed,
                kExactSeconds);
  o.detail = buf;
  return o;
}

// 2. Quadrature-limited unification for the path methods.
Outcome criterion2() {
  const std::vector<Model> suite = polynomial_suite();
  auto suite_error = [&](MethodId m, std::size_t steps, tx::Quadrature rule) {
    double total = 0.0;
    for (std::size_t k = 0; k < suite.size(); ++k) {
      tx::FitOptions o = fit_options(2, 4000 + k);
      o.method.steps = steps;
      o.method.quadrature = rule;
      o.method.samples = 8;
      o.method.sigma = 0.1;
      total += tx::fitting_error(m, suite[k], suite_samples(suite[k], k), o)
                   .error_percent;
    }
    return total / static_cast<double>(suite.size());
  };
  Outcome out;
  std::string detail;
  for (MethodId m : {MethodId::kIntegratedGradients,
                     MethodId::kExpectedGradients}) {
    const double mid = suite_error(m, kQuadratureSteps, tx::Quadrature::kMidpoint);
    const double left = suite_error(m, kQuadratureSteps, tx::Quadrature::kLeft);
    // The midpoint rule integrates these linear integrands exactly, so the
    // doubling sequence uses the left rule where the error is visible.
    std::vector<double> seq;
    for (std::size_t steps = 125; steps <= 2000; steps *= 2) {
      seq.push_back(suite_error(m, steps, tx::Quadrature::kLeft));
    }
    bool monotone = true;
    for (std::size_t i = 1; i < seq.size(); ++i) {
      if (!(seq[i] < seq[i - 1])) monotone = false;
    }
    const bool ok = mid <= kQuadraturePercent && left <= kQuadraturePercent &&
                    monotone;
    out.pass = out.pass && ok;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "%s m=%zu midpoint %.2e%% left %.3f%% <= %.1f%%, "
                  "left m=125..2000 %s; ",
                  tx::method_name(m).c_str(), kQuadratureSteps, mid, left,
                  kQuadraturePercent, monotone ? "decreasing" : "NOT decreasing");
    detail += buf;
  }
  out.detail = detail;
  return out;
}

// 3. Trained sigmoid MLPs.
Outcome criterion3() {
  const auto t0 = Clock::now();
  const std::array<MethodId, 3> methods = {MethodId::kOcclusion1,
                                           MethodId::kShapley,
                                           MethodId::kIntegratedGradients};
  const std::vector<std::vector<std::size_t>> shapes = {
      {6, 8, 6, 1}, {8, 10, 6, 1}, {10, 8, 4, 1}};
  Outcome out;
  std::string detail;
  double worst2 = 0.0;
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    const std::size_t n = shapes[k].front();
    tx::Dataset data = tx::smooth_regression(n, 256, 5000 + k);
    Model model = tx::random_mlp(shapes[k], tx::Activation::sigmoid(),
                                 tx::Activation::identity(), 6000 + k);
    tx::TrainOptions topts;
    topts.epochs = 800;
    const tx::TrainSummary ts = tx::train(model, data, topts);
    const auto samples = tx::gaussian_samples(n, 12, 7000 + k);
    for (MethodId m : methods) {
      const double e2 =
          tx::fitting_error(m, model, samples, fit_options(2, 8000 + k)).error_percent;
      const double e3 =
          tx::fitting_error(m, model, samples, fit_options(3, 8000 + k)).error_percent;
      worst2 = std::max(worst2, e2);
      const bool ok = e2 < kSmoothPercent && e3 < e2;
      out.pass = out.pass && ok;
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%s[%zu] K2 %.3f%% K3 %.3f%%%s; ",
                    tx::method_name(m).c_str(), n, e2, e3, ok ? "" : " (fail)");
      detail += buf;
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "mse %.3g->%.3g; ", ts.initial_loss,
                  ts.final_loss);
    detail += buf;
  }
  const double elapsed = seconds_since(t0);
  out.pass = out.pass && elapsed < kSmoothSeconds;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.1fs < %.0fs", elapsed, kSmoothSeconds);
  out.detail = detail + buf;
  return out;
}

std::vector<Model> mixed_family() {
  std::vector<Model> out;
  for (std::size_t k = 0; k < 6; ++k) {
    out.push_back(tx::random_polynomial_deg2(3 + k, 9000 + k));
  }
  tx::Polynomial cubic;
  cubic.num_inputs = 5;
  cubic.terms = {{3.0, {{0, 1}}},
                 {2.0, {{0, 1}, {1, 1}, {2, 1}}},
                 {-1.5, {{3, 2}, {4, 1}}},
                 {0.5, {{1, 3}}}};
  out.push_back(Model::polynomial(cubic));
  out.push_back(tx::random_mlp({6, 5, 1}, tx::Activation::sigmoid(),
                               tx::Activation::identity(), 9100));
  out.push_back(tx::random_mlp({10, 6, 4, 1}, tx::Activation::softplus(2.0),
                               tx::Activation::identity(), 9101));
  out.push_back(tx::random_mlp({7, 6, 1}, tx::Activation::relu(),
                               tx::Activation::identity(), 9102));
  out.push_back(tx::random_tiny_cnn(3, 3, 2, tx::Activation::sigmoid(), 9103));
  return out;
}

// 4. Harsanyi dividends against Taylor interaction effects.
Outcome criterion4() {
  double gap = 0.0, efficiency = 0.0;
  std::size_t polynomials = 0, models = 0;
  const std::vector<Model> family = mixed_family();
  for (std::size_t k = 0; k < family.size(); ++k) {
    const Model& m = family[k];
    for (std::size_t c = 0; c < 3; ++c) {
      const Vector x = tx::gaussian_samples(m.num_inputs(), 1, 10000 + 10 * k + c)[0];
      const Vector b = sample_baseline(x, 0.5, 11000 + k, c);
      if (m.kind() == tx::ModelKind::kPolynomial) {
        const int order = m.poly().degree();
        gap = std::max(gap, tx::compare_dividends_with_taylor(m, x, b, order).max_gap);
        ++polynomials;
      }
      const tx::HarsanyiTable h = tx::harsanyi(m, x, b);
      double sum = 0.0;
      for (std::size_t s = 1; s < h.dividends().size(); ++s) sum += h.dividends()[s];
      const double fx = m.evaluate(x), fb = m.evaluate(b);
      efficiency = std::max(
          efficiency, std::abs(fx - fb - sum) / std::max(1.0, std::abs(fx - fb)));
      ++models;
    }
  }
  Outcome o;
  o.pass = gap <= kDividendGap && efficiency <= kEfficiencyGap;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "max |H(S)-J(S)| = %.3g over %zu polynomial cases <= %.0e; "
                "efficiency gap %.3g over %zu cases <= %.0e",
                gap, polynomials, kDividendGap, efficiency, models, kEfficiencyGap);
  o.detail = buf;
  return o;
}

// 5. Shapley values from dividends.
Outcome criterion5() {
  double gap = 0.0, oracle_gap = 0.0;
  for (std::size_t k = 0; k < 20; ++k) {
    const std::size_t n = 2 + k % 7;
    Model m = k % 4 == 3
                  ? tx::random_mlp({n, 4, 1}, tx::Activation::sigmoid(),
                                   tx::Activation::identity(), 12000 + k)
                  : tx::random_polynomial_deg2(n, 12000 + k);
    const Vector x = tx::gaussian_samples(n, 1, 13000 + k)[0];
    const Vector b = sample_baseline(x, 0.5, 14000, k);
    const Vector phi = tx::shapley_exact(m, x, b).values;
    const tx::HarsanyiTable h = tx::harsanyi(m, x, b);
    Vector from_dividends(n, 0.0);
    for (std::uint64_t s = 1; s < (std::uint64_t{1} << n); ++s) {
      const tx::VarSet set(s);
      for (std::size_t i : set.members()) {
        from_dividends[i] += h.dividend(set) / static_cast<double>(set.size());
      }
    }
    gap = std::max(gap, max_abs_diff(phi, from_dividends));
    oracle_gap = std::max(oracle_gap,
                          max_abs_diff(phi, oracle::shapley_permutations(m, x, b)));
  }
  Outcome o;
  o.pass = gap <= kShapleyGap && oracle_gap <= kShapleyGap;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "max |phi - sum H(S)/|S|| = %.3g, vs permutation oracle %.3g, "
                "20 models, <= %.0e",
                gap, oracle_gap, kShapleyGap);
  o.detail = buf;
  return o;
}

bool away_from_kinks(const Model& m, const Vector& x) {
  const tx::ForwardTrace t = m.trace(x);
  for (std::size_t l = 0; l < m.layers().size(); ++l) {
    if (m.layers()[l].activation.kind != tx::ActivationKind::kRelu) continue;
    for (double h : t.preactivations[l]) {
      if (std::abs(h) < kKinkMargin) return false;
    }
  }
  return true;
}

// 6. LRP-epsilon against Gradient x Input on ReLU networks.
Outcome criterion6() {
  double worst = 0.0;
  std::size_t pairs = 0, attempts = 0;
  while (pairs < 100 && attempts < 1000) {
    const std::size_t n = 3 + attempts % 6;
    const Model m = tx::random_mlp({n, 6, 5, 1}, tx::Activation::relu(),
                                   tx::Activation::identity(), 15000 + attempts);
    const Vector x = tx::gaussian_samples(n, 1, 16000 + attempts)[0];
    ++attempts;
    if (!away_from_kinks(m, x) || std::abs(m.evaluate(x)) < 1e-6) continue;
    const Vector lrp = tx::lrp_epsilon(m, x, 1e-12).values;
    const Vector gi = tx::grad_input(m, x).values;
    worst = std::max(worst, relative_diff(lrp, gi));
    ++pairs;
  }
  Outcome o;
  o.pass = pairs == 100 && worst <= kLrpRelative;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%zu pairs, max relative gap %.3g <= %.0e",
                pairs, worst, kLrpRelative);
  o.detail = buf;
  return o;
}

Model single_unit(std::size_t n, tx::Activation act, std::uint64_t seed) {
  return tx::random_mlp({n, 1}, act, act, seed);
}

// 7. Single-module back-propagation equivalences.
Outcome criterion7() {
  double rescale = 0.0, shap = 0.0;
  bool bitwise = true;
  for (std::size_t k = 0; k < 20; ++k) {
    const std::size_t n = 2 + k % 7;  // fan-in 2..8
    const Model unit = single_unit(n, tx::Activation::sigmoid(), 17000 + k);
    const Vector x = tx::gaussian_samples(n, 1, 18000 + k)[0];
    const Vector ref = sample_baseline(x, 0.7, 19000, k);
    const Vector r = tx::deeplift_rescale(unit, x, ref).values;
    const Vector ig = tx::integrated_gradients(unit, x, ref, 300,
                                               tx::Quadrature::kMidpoint).values;
    rescale = std::max(rescale, relative_diff(r, ig));
    const Vector ds = tx::deep_shap(unit, x, ref).values;
    shap = std::max(shap, max_abs_diff(ds, tx::shapley_exact(unit, x, ref).values));

    const Model net = tx::random_mlp({n, 7, 5, 1}, tx::Activation::relu(),
                                     tx::Activation::relu(), 20000 + k);
    const Vector xn = tx::gaussian_samples(n, 1, 21000 + k)[0];
    const Vector dt = tx::deep_taylor(net, xn).values;
    const Vector ab = tx::lrp_alpha_beta(net, xn, 1.0, 0.0).values;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::memcmp(&dt[i], &ab[i], sizeof(double)) != 0) bitwise = false;
    }
  }
  Outcome o;
  o.pass = rescale <= kRescaleRelative && shap <= kDeepShapGap && bitwise;
  char buf[220];
  std::snprintf(buf, sizeof(buf),
                "rescale vs IG(m=300) %.3g <= %.0e; deep_shap vs Shapley %.3g "
                "<= %.0e; deep_taylor == lrp_alpha_beta(1,0) %s",
                rescale, kRescaleRelative, shap, kDeepShapGap,
                bitwise ? "bitwise" : "DIFFERS");
  o.detail = buf;
  return o;
}

// 8. Principle matrix. Rows follow all_methods(); columns are low
// approximation error, no unrelated allocation, complete allocation.
Outcome criterion8() {
  struct Row {
    MethodId method;
    std::array<bool, 3> expected;
  };
  const std::vector<Row> frozen = {
      {MethodId::kGradInput, {false, true, true}},
      {MethodId::kOcclusion1, {true, true, false}},
      {MethodId::kOcclusionPatch, {true, false, false}},
      {MethodId::kPredictionDifference, {true, true, false}},
      {MethodId::kGradCam, {false, true, true}},
      {MethodId::kIntegratedGradients, {true, true, true}},
      {MethodId::kExpectedGradients, {true, true, true}},
      {MethodId::kShapley, {true, true, true}},
      {MethodId::kLrpEpsilon, {false, true, true}},
      {MethodId::kLrpAlphaBeta, {true, false, true}},
      {MethodId::kDeepTaylor, {true, false, true}},
      {MethodId::kDeepLiftRescale, {true, true, true}},
      {MethodId::kDeepShap, {true, true, true}},
      {MethodId::kDeepLiftRevealCancel, {true, true, true}},
  };
  const auto verdicts = tx::audit_all(tx::default_probes());
  Outcome o;
  std::size_t mismatches = 0, crosses = 0;
  double weakest = INFINITY;
  if (verdicts.size() != frozen.size()) {
    o.pass = false;
    o.detail = "audit returned " + std::to_string(verdicts.size()) + " rows";
    return o;
  }
  for (std::size_t r = 0; r < frozen.size(); ++r) {
    const auto& v = verdicts[r];
    if (v.method != frozen[r].method) ++mismatches;
    for (std::size_t p = 0; p < 3; ++p) {
      if (v.satisfied[p] != frozen[r].expected[p]) {
        ++mismatches;
        o.detail += tx::method_name(v.method) + "/" +
                    tx::to_string(tx::kAllPrinciples[p]) + " mismatch; ";
      }
      if (!v.satisfied[p]) {
        ++crosses;
        const tx::Witness w = tx::witness(v.method, tx::kAllPrinciples[p]);
        weakest = std::min(weakest, std::abs(w.magnitude));
      }
    }
  }
  o.pass = mismatches == 0 && crosses > 0 && weakest > kWitnessFloor;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "14x3 matrix %zu mismatches; %zu crosses, smallest witness %.3g "
                "> %.0e",
                mismatches, crosses, weakest, kWitnessFloor);
  o.detail += buf;
  return o;
}

// 9. Metric properties.
Outcome criterion9() {
  Outcome o;
  std::string detail;
  // Pure gradient attribution on linear models.
  double worst = 0.0;
  for (std::size_t k = 0; k < 10; ++k) {
    const std::size_t n = 4 + k;
    tx::Polynomial p;
    p.num_inputs = n;
    p.constant = 0.3;
    auto rng = tx::make_engine(22000, "linear", k);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) p.terms.push_back({normal(rng), {{i, 1}}});
    const Model m = Model::polynomial(p);
    const Vector x = tx::gaussian_samples(n, 1, 23000 + k)[0];
    const Vector a = m.gradient(x);
    for (auto kind : {tx::PerturbationKind::kSquareRemoval,
                      tx::PerturbationKind::kGaussian}) {
      tx::PerturbationSpec spec;
      spec.kind = kind;
      spec.grid = {1, n};
      spec.samples = 64;
      spec.seed = 24000 + k;
      worst = std::max(worst, tx::infidelity(m, x, a, spec));
    }
  }
  const bool linear_ok = worst <= kInfidelityBound;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "linear infidelity max %.3g <= %.0e; ", worst,
                kInfidelityBound);
  detail += buf;

  // Three worked bounding-box cases, n = 8.
  const tx::VarSet box{1, 2, 3, 4};
  const Vector exact = {0, 5, 6, 7, 8, 0, 0, 0};
  const Vector complement = {9, 0, 0, 0, 0, 9, 9, 9};
  const Vector half = {0, 9, 8, 1, 1, 7, 6, 0};
  const double c1 = tx::bbox_accuracy(exact, box);
  const double c2 = tx::bbox_accuracy(complement, box);
  const double c3 = tx::bbox_accuracy(half, box);
  bool range_ok = true;
  for (std::size_t k = 0; k < 50; ++k) {
    const Vector a = tx::gaussian_samples(12, 1, 25000 + k)[0];
    const double v = tx::bbox_accuracy(a, tx::VarSet{k % 12, (k + 5) % 12});
    if (v < 0.0 || v > 1.0) range_ok = false;
  }
  const bool bbox_ok = c1 == 1.0 && c2 == 0.0 && c3 == 0.5 && range_ok;
  std::snprintf(buf, sizeof(buf), "bbox cases %.2f/%.2f/%.2f, range %s; ", c1,
                c2, c3, range_ok ? "ok" : "violated");
  detail += buf;

  // Deterministic correlation CSV.
  const std::vector<Model> models = {
      tx::random_mlp({6, 5, 1}, tx::Activation::sigmoid(),
                     tx::Activation::identity(), 26000),
      tx::random_polynomial_deg2(6, 26001)};
  const auto samples = tx::gaussian_samples(6, 4, 26002);
  tx::CorrelationOptions co;
  co.perturbation.grid = {2, 3};
  co.perturbation.seed = 26003;
  co.method.steps = 64;
  co.method.seed = 26004;
  const std::string csv1 =
      tx::to_csv(tx::principle_correlation(models, samples, {}, co));
  const std::string csv2 =
      tx::to_csv(tx::principle_correlation(models, samples, {}, co));
  std::size_t lines = 0;
  for (char c : csv1) lines += c == '\n';
  const bool csv_ok = csv1 == csv2 && lines == 1 + 14 * models.size();
  std::snprintf(buf, sizeof(buf), "correlation CSV %zu rows %s", lines - 1,
                csv1 == csv2 ? "identical across runs" : "DIFFERS across runs");
  detail += buf;
  o.pass = linear_ok && bbox_ok && csv_ok;
  o.detail = detail;
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"exact unification on degree-2 polynomials", criterion1},
      {"quadrature-limited unification (IG, EG)", criterion2},
      {"smooth-model unification on trained sigmoid MLPs", criterion3},
      {"Harsanyi dividends equal Taylor interaction effects", criterion4},
      {"Shapley values from Harsanyi dividends", criterion5},
      {"LRP-epsilon equals Gradient x Input on ReLU MLPs", criterion6},
      {"single-module back-propagation equivalences", criterion7},
      {"principle matrix with witnesses", criterion8},
      {"metric sanity", criterion9},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %zu: %s -- %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
