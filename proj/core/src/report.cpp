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

#include "taylorx/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "taylorx/baseline_spec.hpp"
#include "taylorx/datasets.hpp"
#include "taylorx/error.hpp"
#include "taylorx/idx.hpp"
#include "taylorx/model_io.hpp"
#include "taylorx/parallel.hpp"
#include "taylorx/random.hpp"
#include "taylorx/training.hpp"

namespace taylorx {

using nlohmann::json;

namespace {

json maybe(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json vec(const Vector& v) {
  json a = json::array();
  for (double x : v) a.push_back(maybe(x));
  return a;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

std::string csv_value(const json& v) {
  if (v.is_null()) return "NA";
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_number()) return v.dump();
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  for (char& c : s) {
    if (c == ',' || c == '\n') c = ';';
  }
  return s;
}

// Set text such as {0,2} with commas swapped for spaces, as in the
// decomposition and Harsanyi CSV writers.
std::string spaced(std::string s) {
  std::replace(s.begin(), s.end(), ',', ' ');
  return s;
}

void fit_csv(const json& fits, std::ostringstream& os) {
  for (const json& f : fits) {
    os << csv_value(f["method"]) << ',' << f["order"].get<int>() << ','
       << csv_value(f["error_percent"]) << '\n';
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json Report::to_json() const {
  return json{{"kind", kind},
              {"version", version},
              {"config_hash", config_hash},
              {"settings", settings},
              {"payload", payload}};
}

Report Report::from_json(const json& j) {
  Report r;
  try {
    r.kind = j.at("kind").get<std::string>();
    r.version = j.at("version").get<std::string>();
    r.config_hash = j.at("config_hash").get<std::string>();
    r.settings = j.at("settings");
    r.payload = j.at("payload");
  } catch (const json::exception& e) {
    throw Error(std::string("malformed report: ") + e.what());
  }
  return r;
}

std::string Report::dump() const { return to_json().dump(2) + "\n"; }

Report make_report(std::string kind, json settings, json payload) {
  Report r;
  r.kind = std::move(kind);
  settings["version"] = kVersion;
  r.config_hash = hex64(fnv1a64(settings.dump()));
  r.settings = std::move(settings);
  r.payload = std::move(payload);
  return r;
}

Report load_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open report " + path);
  try {
    return Report::from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw Error("report " + path + " is not valid JSON: " + e.what());
  }
}

void save_report(const Report& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write report " + path);
  out << report.dump();
}

json to_json(const AttributionResult& r) {
  json settings = json::object();
  for (const auto& [k, v] : r.settings) settings[k] = v;
  json guards = json::array();
  for (const GuardEvent& g : r.guards) {
    guards.push_back({{"layer", g.layer},
                      {"unit", g.unit},
                      {"rule", g.rule},
                      {"denominator", maybe(g.denominator)}});
  }
  json j{{"method", method_name(r.method)},
         {"values", vec(r.values)},
         {"baseline",
          {{"origin", r.baseline.origin},
           {"values", vec(r.baseline.values)},
           {"draws", r.baseline.draws.size()},
           {"seed", r.baseline.seed}}},
         {"settings", settings},
         {"guards", guards}};
  if (!r.pre_relu.empty()) j["pre_relu"] = vec(r.pre_relu);
  if (r.layers) {
    json layers = json::array();
    for (const Vector& v : r.layers->relevance) layers.push_back(vec(v));
    j["layer_relevance"] = layers;
  }
  return j;
}

json to_json(const TaylorDecomposition& d) {
  json terms = json::array();
  for (const TaylorTerm& t : d.terms()) {
    terms.push_back({{"kappa", t.kappa.to_string()},
                     {"order", t.kappa.order()},
                     {"field", t.kappa.receptive_field().to_string()},
                     {"coefficient", maybe(t.coefficient)},
                     {"derivative", maybe(t.derivative)},
                     {"displacement", maybe(t.displacement)},
                     {"value", maybe(t.value)}});
  }
  return {{"order", d.order()},
          {"sample", vec(d.sample())},
          {"expansion_point", vec(d.expansion_point())},
          {"f_sample", maybe(d.f_sample())},
          {"f_expansion", maybe(d.f_expansion())},
          {"term_sum", maybe(d.term_sum())},
          {"residual", maybe(d.residual())},
          {"piecewise_local", d.piecewise_local()},
          {"terms", terms}};
}

json to_json(const HarsanyiTable& t) {
  json rows = json::array();
  const std::size_t n = t.num_variables();
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) {
    VarSet s(m);
    rows.push_back({{"subset", s.to_string()},
                    {"size", s.size()},
                    {"dividend", maybe(t.dividend(s))}});
  }
  return {{"num_variables", n}, {"dividends", rows}};
}

json to_json(const FitReport& r) {
  json per = json::array();
  for (double e : r.per_sample) per.push_back(e < 0 ? json(nullptr) : json(e));
  return {{"method", method_name(r.method)},
          {"order", r.order},
          {"error_percent", maybe(r.error_percent)},
          {"per_sample", per},
          {"skipped", r.skipped}};
}

json to_json(const IdentityLedger& l) {
  json checks = json::array();
  for (const IdentityCheck& c : l.checks) {
    checks.push_back({{"id", c.id},
                      {"statement", c.statement},
                      {"residual", maybe(c.residual)},
                      {"tolerance", c.tolerance},
                      {"cases", c.cases},
                      {"passed", c.passed},
                      {"skipped", c.skipped}});
  }
  return {{"all_passed", l.all_passed()}, {"checks", checks}};
}

json to_json(const Witness& w) {
  json j{{"method", method_name(w.method)},
         {"principle", to_string(w.principle)},
         {"description", w.description},
         {"x", vec(w.x)},
         {"baseline", vec(w.baseline)},
         {"magnitude", maybe(w.magnitude)}};
  if (w.kappa) j["kappa"] = w.kappa->to_string();
  if (w.model) j["model"] = to_string(w.model->kind());
  return j;
}

json to_json(const std::vector<PrincipleVerdict>& v) {
  json rows = json::array();
  for (const PrincipleVerdict& p : v) {
    json sat = json::object();
    json evidence = json::object();
    for (Principle pr : kAllPrinciples) {
      sat[to_string(pr)] = p.satisfies(pr);
      evidence[to_string(pr)] = p.evidence[static_cast<std::size_t>(pr)];
    }
    rows.push_back({{"method", method_name(p.method)},
                    {"satisfied", sat},
                    {"evidence", evidence},
                    {"count", p.count()}});
  }
  return rows;
}

json to_json(const std::vector<CorrelationRow>& rows) {
  json out = json::array();
  for (const CorrelationRow& r : rows) {
    out.push_back({{"model", r.model},
                   {"method", method_name(r.method)},
                   {"principle_count", r.principle_count},
                   {"metric", r.metric},
                   {"value", maybe(r.value)},
                   {"status", r.status}});
  }
  return out;
}

std::string export_plotdata(const Report& report, const std::string& format) {
  if (format == "json") return report.dump();
  if (format != "csv") {
    throw Error("unknown export format '" + format + "' (expected csv or json)");
  }
  const json& p = report.payload;
  std::ostringstream os;
  try {
    if (report.kind == "fit") {
      os << "method,order,error_percent\n";
      fit_csv(p.at("fits"), os);
    } else if (report.kind == "attribution-dump") {
      const json& values = p.at("values");
      std::size_t cols = values.size();
      if (p.contains("grid")) cols = p["grid"].at("cols").get<std::size_t>();
      if (cols == 0) cols = 1;
      os << "row,col,value\n";
      for (std::size_t i = 0; i < values.size(); ++i) {
        os << i / cols << ',' << i % cols << ',' << csv_value(values[i]) << '\n';
      }
    } else if (report.kind == "metric-table") {
      os << "model,method,principle_count,metric,value,status\n";
      for (const json& r : p.at("rows")) {
        os << csv_value(r["model"]) << ',' << csv_value(r["method"]) << ','
           << r["principle_count"].get<int>() << ',' << csv_value(r["metric"])
           << ',' << csv_value(r["value"]) << ',' << csv_value(r["status"])
           << '\n';
      }
    } else if (report.kind == "theorem-ledger") {
      os << "id,residual,tolerance,passed\n";
      for (const json& c : p.at("checks")) {
        os << csv_value(c["id"]) << ',' << csv_value(c["residual"]) << ','
           << csv_value(c["tolerance"]) << ','
           << (c["skipped"].get<bool>() ? "skipped"
                                        : csv_value(c["passed"]))
           << '\n';
      }
    } else if (report.kind == "principle-matrix") {
      os << "method";
      for (Principle pr : kAllPrinciples) os << ',' << to_string(pr);
      os << ",count\n";
      for (const json& r : p.at("verdicts")) {
        os << csv_value(r["method"]);
        for (Principle pr : kAllPrinciples) {
          os << ',' << csv_value(r["satisfied"][to_string(pr)]);
        }
        os << ',' << r["count"].get<int>() << '\n';
      }
    } else if (report.kind == "decomposition") {
      os << "kappa,order,field,coefficient,derivative,displacement,value\n";
      for (const json& t : p.at("terms")) {
        os << csv_value(t["kappa"]) << ',' << t["order"].get<int>() << ','
           << spaced(t["field"].get<std::string>()) << ','
           << csv_value(t["coefficient"]) << ',' << csv_value(t["derivative"])
           << ',' << csv_value(t["displacement"]) << ','
           << csv_value(t["value"]) << '\n';
      }
    } else if (report.kind == "harsanyi") {
      os << "subset,size,dividend\n";
      for (const json& d : p.at("dividends")) {
        os << spaced(d["subset"].get<std::string>()) << ','
           << d["size"].get<std::size_t>() << ',' << csv_value(d["dividend"])
           << '\n';
      }
    } else if (report.kind == "experiment") {
      os << "section,item,order,value\n";
      if (p.contains("fit")) {
        for (const json& f : p["fit"]) {
          os << "fit," << csv_value(f["model"]) << '/'
             << csv_value(f["method"]) << ',' << f["order"].get<int>() << ','
             << csv_value(f["error_percent"]) << '\n';
        }
      }
      if (p.contains("identities")) {
        for (const json& c : p["identities"]["checks"]) {
          os << "identities," << csv_value(c["id"]) << ",,"
             << csv_value(c["residual"]) << '\n';
        }
      }
      if (p.contains("audit")) {
        for (const json& r : p["audit"]["verdicts"]) {
          os << "audit," << csv_value(r["method"]) << ",,"
             << r["count"].get<int>() << '\n';
        }
      }
      if (p.contains("metrics")) {
        for (const json& r : p["metrics"]) {
          os << "metrics," << csv_value(r["model"]) << '/'
             << csv_value(r["method"]) << ",," << csv_value(r["value"])
             << '\n';
        }
      }
    } else {
      throw UnsupportedError("report kind '" + report.kind +
                             "' has no CSV export");
    }
  } catch (const json::exception& e) {
    throw Error("report payload does not match kind '" + report.kind +
                "': " + e.what());
  }
  return os.str();
}

std::vector<Model> bundled_models(std::uint64_t seed) {
  std::vector<Model> zoo;

  Model poly = random_polynomial_deg2(6, substream_seed(seed, "zoo", 0), 0.5);
  poly.set_name("poly-deg2");
  zoo.push_back(std::move(poly));

  Polynomial cubic;
  cubic.num_inputs = 3;
  cubic.terms = {{3.0, {{0, 1}}}, {2.0, {{0, 1}, {1, 1}, {2, 1}}}};
  Model canonical = Model::polynomial(cubic);
  canonical.set_name("poly-cubic");
  zoo.push_back(std::move(canonical));

  TrainOptions opts;
  opts.epochs = 400;
  Dataset smooth = smooth_regression(8, 256, substream_seed(seed, "zoo", 1));
  Model sig = random_mlp({8, 6, 4, 1}, Activation::sigmoid(),
                         Activation::identity(), substream_seed(seed, "zoo", 2));
  train(sig, smooth, opts);
  sig.set_name("sigmoid-mlp");
  zoo.push_back(std::move(sig));

  Dataset smooth6 = smooth_regression(6, 256, substream_seed(seed, "zoo", 3));
  Model soft = random_mlp({6, 5, 1}, Activation::softplus(2.0),
                          Activation::identity(), substream_seed(seed, "zoo", 4));
  train(soft, smooth6, opts);
  soft.set_name("softplus-mlp");
  zoo.push_back(std::move(soft));

  Model relu = random_mlp({6, 8, 1}, Activation::relu(), Activation::identity(),
                          substream_seed(seed, "zoo", 5));
  relu.set_name("relu-mlp");
  zoo.push_back(std::move(relu));

  Dataset boxes = planted_box({3, 4}, 128, substream_seed(seed, "zoo", 6));
  Model cnn = random_tiny_cnn(3, 4, 2, Activation::sigmoid(),
                              substream_seed(seed, "zoo", 7));
  train(cnn, boxes, opts);
  cnn.set_name("tiny-cnn");
  zoo.push_back(std::move(cnn));
  return zoo;
}

namespace {

GridShape grid_of(const Model& m) {
  if (m.kind() == ModelKind::kTinyCnn) return {m.conv().height, m.conv().width};
  return {1, m.num_inputs()};
}

std::vector<Vector> experiment_samples(const ExperimentConfig& c,
                                       const Model& m, std::size_t mi) {
  const std::string& s = c.samples;
  const auto colon = s.find(':');
  const std::string kind = s.substr(0, colon);
  const std::string arg = s.substr(colon + 1);
  std::vector<Vector> out;
  if (kind == "gaussian") {
    out = gaussian_samples(m.num_inputs(), std::stoull(arg),
                           substream_seed(c.seed, "samples", mi));
  } else if (kind == "idx") {
    IdxArray a = read_idx(arg);
    for (std::size_t i = 0; i < a.count(); ++i) out.push_back(a.item(i));
  } else {
    out = read_vectors(arg);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].size() != m.num_inputs()) {
      throw DimensionError("sample " + std::to_string(i) + " has " +
                           std::to_string(out[i].size()) + " values but model " +
                           m.name() + " expects " +
                           std::to_string(m.num_inputs()));
    }
  }
  return out;
}

MethodConfig method_config(const ExperimentConfig& c) {
  MethodConfig m;
  m.steps = c.steps;
  m.quadrature = c.quadrature;
  m.samples = c.mc_samples;
  m.sigma = c.mc_sigma;
  m.seed = substream_seed(c.seed, "method");
  return m;
}

bool has_suite(const ExperimentConfig& c, const std::string& s) {
  for (const std::string& x : c.suites) {
    if (x == s) return true;
  }
  return false;
}

}  // namespace

Report run_experiment(const ExperimentConfig& c) {
  if (c.workers > 0) set_worker_count(c.workers);
  std::vector<Model> models;
  if (c.bundled_models) models = bundled_models(c.seed);
  for (const std::string& path : c.models) models.push_back(load_model(path));
  for (std::size_t i = 0; i < models.size(); ++i) {
    if (models[i].name().empty()) models[i].set_name("model" + std::to_string(i));
  }

  json settings{{"name", c.name},
                {"seed", c.seed},
                {"models", c.models},
                {"bundled_models", c.bundled_models},
                {"samples", c.samples},
                {"suites", c.suites},
                {"orders", c.orders},
                {"baseline_sigma", c.baseline_sigma},
                {"steps", c.steps},
                {"quadrature", to_string(c.quadrature)},
                {"mc_samples", c.mc_samples},
                {"mc_sigma", c.mc_sigma},
                {"metric", c.metric},
                {"canonical_config", canonical_config(c)}};
  json methods = json::array();
  for (MethodId m : c.methods) methods.push_back(method_name(m));
  settings["methods"] = methods;

  json payload = json::object();
  json names = json::array();
  for (const Model& m : models) names.push_back(m.name());
  payload["models"] = names;

  if (has_suite(c, "fit")) {
    json fits = json::array();
    for (std::size_t mi = 0; mi < models.size(); ++mi) {
      const Model& model = models[mi];
      const std::vector<Vector> samples = experiment_samples(c, model, mi);
      for (MethodId method : c.methods) {
        if (is_backprop(method) || method == MethodId::kGradCam) continue;
        for (int order : c.orders) {
          FitOptions fo;
          fo.order = order;
          fo.baseline_sigma = c.baseline_sigma;
          fo.seed = substream_seed(c.seed, "fit", mi);
          fo.method = method_config(c);
          json row;
          try {
            row = to_json(fitting_error(method, model, samples, fo));
          } catch (const Error& e) {
            throw Error("fit stage, model " + model.name() + ", method " +
                        method_name(method) + ", K=" + std::to_string(order) +
                        ": " + e.what());
          }
          row["model"] = model.name();
          fits.push_back(row);
        }
      }
    }
    payload["fit"] = fits;
  }

  if (has_suite(c, "identities")) {
    VerifyOptions vo;
    vo.seed = substream_seed(c.seed, "identities");
    vo.baseline_sigma = c.baseline_sigma;
    try {
      payload["identities"] = to_json(verify_identities(models, vo));
    } catch (const Error& e) {
      throw Error(std::string("identities stage: ") + e.what());
    }
  }

  if (has_suite(c, "audit")) {
    std::vector<PrincipleVerdict> verdicts = audit_all(default_probes());
    json witnesses = json::array();
    for (const PrincipleVerdict& v : verdicts) {
      for (Principle p : kAllPrinciples) {
        if (!v.satisfies(p)) witnesses.push_back(to_json(witness(v.method, p)));
      }
    }
    payload["audit"] = {{"verdicts", to_json(verdicts)},
                        {"witnesses", witnesses}};
  }

  if (has_suite(c, "metrics")) {
    json rows = json::array();
    for (std::size_t mi = 0; mi < models.size(); ++mi) {
      const Model& model = models[mi];
      CorrelationOptions co;
      co.metric = c.metric;
      co.method = method_config(c);
      co.perturbation.grid = grid_of(model);
      co.perturbation.samples = c.mc_samples;
      co.perturbation.seed = substream_seed(c.seed, "perturbation", mi);
      std::vector<Vector> samples;
      std::vector<VarSet> boxes;
      if (c.metric == "bbox") {
        if (c.samples.rfind("gaussian:", 0) != 0) {
          throw ConfigError("the bbox metric needs generated samples");
        }
        GridShape g = grid_of(model);
        if (g.rows < 3 && g.cols < 3) continue;
        Dataset d = planted_box(g, std::stoull(c.samples.substr(9)),
                                substream_seed(c.seed, "boxes", mi));
        samples = d.inputs;
        boxes = d.boxes;
        if (!box_eligible(3, model.num_inputs())) {
          for (VarSet& b : boxes) b = VarSet();
        }
      } else {
        samples = experiment_samples(c, model, mi);
      }
      std::vector<CorrelationRow> all =
          principle_correlation({model}, samples, boxes, co);
      std::vector<CorrelationRow> kept;
      for (const CorrelationRow& r : all) {
        for (MethodId m : c.methods) {
          if (m == r.method) kept.push_back(r);
        }
      }
      for (json& r : to_json(kept)) rows.push_back(std::move(r));
    }
    payload["metrics"] = rows;
  }

  return make_report("experiment", settings, payload);
}

}  // namespace taylorx
