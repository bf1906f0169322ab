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

#include "taylorx/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "taylorx/error.hpp"
#include "taylorx/parallel.hpp"
#include "taylorx/principles.hpp"
#include "taylorx/random.hpp"

namespace taylorx {

std::vector<Vector> draw_perturbations(ConstVec x,
                                       const PerturbationSpec& spec) {
  if (spec.samples == 0) throw Error("infidelity needs at least one draw");
  auto engine = make_engine(spec.seed, "perturbation");
  std::vector<Vector> out;
  out.reserve(spec.samples);
  if (spec.kind == PerturbationKind::kGaussian) {
    std::normal_distribution<double> normal(0.0, spec.sigma);
    for (std::size_t s = 0; s < spec.samples; ++s) {
      Vector p(x.size());
      for (double& v : p) v = normal(engine);
      out.push_back(std::move(p));
    }
    return out;
  }
  if (spec.grid.size() != x.size()) {
    throw DimensionError("perturbation grid " + std::to_string(spec.grid.rows) +
                         "x" + std::to_string(spec.grid.cols) +
                         " does not match input size " +
                         std::to_string(x.size()));
  }
  const std::size_t sr = std::min(spec.side, spec.grid.rows);
  const std::size_t sc = std::min(spec.side, spec.grid.cols);
  if (sr == 0 || sc == 0) throw Error("square side must be positive");
  std::uniform_int_distribution<std::size_t> row(0, spec.grid.rows - sr);
  std::uniform_int_distribution<std::size_t> col(0, spec.grid.cols - sc);
  for (std::size_t s = 0; s < spec.samples; ++s) {
    const std::size_t r0 = row(engine);
    const std::size_t c0 = col(engine);
    Vector p(x.size(), 0.0);
    for (std::size_t r = r0; r < r0 + sr; ++r) {
      for (std::size_t c = c0; c < c0 + sc; ++c) {
        const std::size_t i = r * spec.grid.cols + c;
        p[i] = x[i];
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

double infidelity(const Model& model, ConstVec x, ConstVec attribution,
                  const PerturbationSpec& spec) {
  require_size(attribution, x.size(), "attribution");
  const double fx = model.evaluate(x);
  double total = 0.0;
  const std::vector<Vector> draws = draw_perturbations(x, spec);
  for (const Vector& p : draws) {
    Vector moved(x.size());
    double dot = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      moved[i] = x[i] - p[i];
      dot += p[i] * attribution[i];
    }
    const double r = dot - (fx - model.evaluate(moved));
    total += r * r;
  }
  return total / static_cast<double>(draws.size());
}

std::vector<std::size_t> top_m(ConstVec attribution, std::size_t m) {
  if (m > attribution.size()) throw Error("top-m larger than the input");
  std::vector<std::size_t> idx(attribution.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return attribution[a] > attribution[b];
  });
  idx.resize(m);
  return idx;
}

double bbox_accuracy(ConstVec attribution, VarSet box) {
  const std::size_t m = box.size();
  if (m == 0) throw Error("bounding box is empty");
  std::size_t hit = 0;
  for (std::size_t i : top_m(attribution, m)) {
    if (box.contains(i)) ++hit;
  }
  return static_cast<double>(hit) / static_cast<double>(m);
}

bool box_eligible(std::size_t box_size, std::size_t input_size) {
  return box_size > 0 &&
         static_cast<double>(box_size) < 0.33 * static_cast<double>(input_size);
}

namespace {

std::string applicability(MethodId method, const Model& m) {
  if (method == MethodId::kGradCam && m.kind() != ModelKind::kTinyCnn) {
    return "not-applicable: needs a tiny-cnn";
  }
  if (is_backprop(method) && !m.has_layers()) {
    return "not-applicable: needs a layered model";
  }
  return "ok";
}

}  // namespace

std::vector<CorrelationRow> principle_correlation(
    const std::vector<Model>& models, const std::vector<Vector>& samples,
    const std::vector<VarSet>& boxes, const CorrelationOptions& options) {
  const bool bbox = options.metric == "bbox";
  if (!bbox && options.metric != "infidelity") {
    throw Error("unknown metric '" + options.metric + "'");
  }
  if (bbox && boxes.size() != samples.size()) {
    throw DimensionError("bbox metric needs one box per sample");
  }
  const std::vector<PrincipleVerdict> verdicts = audit_all(default_probes());
  std::vector<CorrelationRow> rows;
  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    const Model& model = models[mi];
    const std::string name =
        model.name().empty() ? "model" + std::to_string(mi) : model.name();
    for (const PrincipleVerdict& v : verdicts) {
      CorrelationRow row;
      row.model = name;
      row.method = v.method;
      row.principle_count = v.count();
      row.metric = options.metric;
      row.status = applicability(v.method, model);
      if (row.status != "ok") {
        row.value = std::nan("");
        rows.push_back(row);
        continue;
      }
      Vector values(samples.size(), std::nan(""));
      try {
        parallel_for(samples.size(), [&](std::size_t s) {
          const Vector& x = samples[s];
          if (bbox && boxes[s].empty()) return;
          Vector b(x.size(), options.baseline_value);
          MethodConfig cfg = options.method;
          cfg.seed = substream_seed(options.method.seed, "metric_method", s);
          AttributionResult a = attribute(v.method, model, x, b, cfg);
          if (bbox) {
            values[s] = bbox_accuracy(a.values, boxes[s]);
          } else {
            PerturbationSpec p = options.perturbation;
            p.seed = substream_seed(options.perturbation.seed, "metric_draw", s);
            values[s] = infidelity(model, x, a.values, p);
          }
        });
        double sum = 0.0;
        std::size_t used = 0;
        for (double x : values) {
          if (std::isnan(x)) continue;
          sum += x;
          ++used;
        }
        row.value = used == 0 ? std::nan("") : sum / used;
        if (used == 0) row.status = "no-eligible-samples";
      } catch (const Error& e) {
        row.value = std::nan("");
        row.status = std::string("error: ") + e.what();
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::string to_csv(const std::vector<CorrelationRow>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << "model,method,principle_count,metric,value,status\n";
  for (const CorrelationRow& r : rows) {
    os << r.model << ',' << method_name(r.method) << ',' << r.principle_count
       << ',' << r.metric << ',';
    if (std::isnan(r.value)) {
      os << "NA";
    } else {
      os << r.value;
    }
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    os << ',' << status << '\n';
  }
  return os.str();
}

}  // namespace taylorx
