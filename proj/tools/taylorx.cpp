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

// taylorx command line: attribution, Taylor and Harsanyi decompositions,
// identity verification, principle audits and metric tables.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "taylorx/attribution.hpp"
#include "taylorx/baseline_spec.hpp"
#include "taylorx/config.hpp"
#include "taylorx/error.hpp"
#include "taylorx/harsanyi.hpp"
#include "taylorx/idx.hpp"
#include "taylorx/model_io.hpp"
#include "taylorx/parallel.hpp"
#include "taylorx/principles.hpp"
#include "taylorx/report.hpp"
#include "taylorx/taylor.hpp"

namespace fs = std::filesystem;
namespace tx = taylorx;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kHardError = 1;
constexpr int kConfigError = 2;

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Writes to `path`, or stdout for "" and "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw tx::Error("cannot write " + path);
  out << text;
  if (!out) throw tx::Error("write failed for " + path);
}

// A directory (every regular, non-hidden file, sorted), a comma list of
// files, or "bundled".
std::vector<std::string> model_paths(const std::string& spec) {
  std::vector<std::string> out;
  if (fs::is_directory(spec)) {
    for (const auto& e : fs::directory_iterator(spec)) {
      const std::string name = e.path().filename().string();
      if (e.is_regular_file() && !name.empty() && name[0] != '.') {
        out.push_back(e.path().string());
      }
    }
    std::sort(out.begin(), out.end());
    if (out.empty()) throw tx::ConfigError("no model files in " + spec);
    return out;
  }
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void set_models(tx::ExperimentConfig& c, const std::string& spec) {
  if (spec.empty() || spec == "bundled") {
    c.bundled_models = true;
  } else {
    c.models = model_paths(spec);
  }
}

std::vector<tx::Vector> read_inputs(const std::string& path) {
  if (ends_with(path, ".idx") || ends_with(path, "-ubyte")) {
    tx::IdxArray a = tx::read_idx(path);
    std::vector<tx::Vector> out;
    for (std::size_t i = 0; i < a.count(); ++i) out.push_back(a.item(i));
    return out;
  }
  return tx::read_vectors(path);
}

// "RxC" -> grid shape.
tx::GridShape parse_grid(const std::string& text) {
  const auto x = text.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument(text);
    std::size_t used = 0;
    tx::GridShape g;
    g.rows = std::stoul(text.substr(0, x), &used);
    if (used != x) throw std::invalid_argument(text);
    const std::string c = text.substr(x + 1);
    g.cols = std::stoul(c, &used);
    if (used != c.size() || g.rows == 0 || g.cols == 0) {
      throw std::invalid_argument(text);
    }
    return g;
  } catch (const std::logic_error&) {
    throw tx::ConfigError("grid '" + text + "' is not ROWSxCOLS");
  }
}

std::vector<std::size_t> sample_indices(long sample, std::size_t count) {
  if (count == 0) throw tx::ConfigError("the input file holds no samples");
  if (sample < 0) {
    std::vector<std::size_t> all(count);
    for (std::size_t i = 0; i < count; ++i) all[i] = i;
    return all;
  }
  if (static_cast<std::size_t>(sample) >= count) {
    throw tx::ConfigError("sample index " + std::to_string(sample) +
                          " out of range for " + std::to_string(count) +
                          " samples");
  }
  return {static_cast<std::size_t>(sample)};
}

struct AttributeArgs {
  std::string method;
  std::string model;
  std::string input;
  std::string baseline = "scalar:0";
  std::string out;
  std::string dump;
  std::string grid;
  std::string patch;
  tx::MethodConfig config;
  std::string quadrature = "midpoint";
};

int run_attribute(const AttributeArgs& a) {
  tx::MethodId method;
  tx::MethodConfig cfg = a.config;
  try {
    method = tx::parse_method(a.method);
    cfg.quadrature = tx::parse_quadrature(a.quadrature);
  } catch (const tx::Error& e) {
    throw tx::ConfigError(e.what());
  }
  if (method == tx::MethodId::kLrpAlphaBeta &&
      std::abs(cfg.alpha + cfg.beta - 1.0) > 1e-12) {
    std::cerr << "warning: alpha + beta = " << cfg.alpha + cfg.beta
              << "; the allocation is no longer complete\n";
  }
  const tx::Model model = tx::load_model(a.model);
  const std::vector<tx::Vector> inputs = read_inputs(a.input);
  const tx::BaselineSpec bspec = tx::parse_baseline_spec(a.baseline);

  tx::GridShape grid{1, model.num_inputs()};
  if (!a.grid.empty()) {
    grid = parse_grid(a.grid);
  } else if (model.kind() == tx::ModelKind::kTinyCnn) {
    grid = {model.conv().height, model.conv().width};
  }
  if (grid.size() != model.num_inputs()) {
    throw tx::ConfigError("grid " + a.grid + " does not cover " +
                          std::to_string(model.num_inputs()) + " inputs");
  }
  if (!a.patch.empty()) {
    const tx::GridShape p = parse_grid(a.patch);
    cfg.patches = tx::grid_patches(grid.rows, grid.cols, p.rows, p.cols);
  }

  std::ostringstream csv;
  csv.precision(17);
  csv << "sample,row,col,value\n";
  json results = json::array();
  for (std::size_t s = 0; s < inputs.size(); ++s) {
    if (inputs[s].size() != model.num_inputs()) {
      throw tx::DimensionError("sample " + std::to_string(s) + " has " +
                               std::to_string(inputs[s].size()) +
                               " values, the model expects " +
                               std::to_string(model.num_inputs()));
    }
    const tx::Vector b = tx::resolve_baseline(bspec, inputs[s], s);
    tx::AttributionResult r;
    try {
      r = tx::attribute(method, model, inputs[s], b, cfg);
    } catch (const tx::Error& e) {
      throw tx::Error(tx::method_name(method) + " on sample " +
                      std::to_string(s) + ": " + e.what());
    }
    r.baseline.origin = a.baseline;
    for (std::size_t i = 0; i < r.values.size(); ++i) {
      csv << s << ',' << i / grid.cols << ',' << i % grid.cols << ','
          << r.values[i] << '\n';
    }
    for (const tx::GuardEvent& g : r.guards) {
      std::cerr << "warning: sample " << s << " layer " << g.layer << " unit "
                << g.unit << ": " << g.rule << " denominator "
                << g.denominator << " below floor, share set to 0\n";
    }
    results.push_back(tx::to_json(r));
  }
  emit(a.out, csv.str());
  if (!a.dump.empty()) {
    json settings{{"method", tx::method_name(method)},
                  {"model", a.model},
                  {"input", a.input},
                  {"baseline", a.baseline},
                  {"steps", cfg.steps},
                  {"quadrature", tx::to_string(cfg.quadrature)},
                  {"samples", cfg.samples},
                  {"sigma", cfg.sigma},
                  {"seed", cfg.seed}};
    json payload{{"values", results[0]["values"]},
                 {"grid", {{"rows", grid.rows}, {"cols", grid.cols}}},
                 {"results", results}};
    tx::save_report(tx::make_report("attribution-dump", settings, payload),
                    a.dump);
  }
  return kOk;
}

struct DecomposeArgs {
  std::string model;
  std::string input;
  std::string baseline = "scalar:0";
  std::string out;
  int order = 2;
  long sample = 0;
  std::size_t max_terms = 200000;
};

int run_decompose(const DecomposeArgs& a, bool dividends) {
  const tx::Model model = tx::load_model(a.model);
  const std::vector<tx::Vector> inputs = read_inputs(a.input);
  const tx::BaselineSpec bspec = tx::parse_baseline_spec(a.baseline);
  const bool as_json = ends_with(a.out, ".json");
  std::string csv;
  json items = json::array();
  for (std::size_t s : sample_indices(a.sample, inputs.size())) {
    const tx::Vector b = tx::resolve_baseline(bspec, inputs[s], s);
    std::string part;
    json item;
    if (dividends) {
      const tx::HarsanyiTable t = tx::harsanyi(model, inputs[s], b);
      part = tx::to_csv(t);
      item = tx::to_json(t);
    } else {
      tx::ExpandOptions opt;
      opt.max_terms = a.max_terms;
      const tx::TaylorDecomposition d =
          tx::expand(model, inputs[s], b, a.order, opt);
      part = tx::to_csv(d);
      item = tx::to_json(d);
      std::cerr << "sample " << s << ": " << d.terms().size()
                << " terms, residual " << tx::format_double(d.residual())
                << '\n';
    }
    item["sample"] = s;
    items.push_back(item);
    if (csv.empty()) {
      csv = part;
    } else {
      csv += part.substr(part.find('\n') + 1);
    }
  }
  if (!as_json) {
    emit(a.out, csv);
    return kOk;
  }
  json settings{{"model", a.model},
                {"input", a.input},
                {"baseline", a.baseline},
                {"sample", a.sample}};
  if (!dividends) settings["order"] = a.order;
  const json payload = items.size() == 1 ? items[0] : json{{"samples", items}};
  emit(a.out, tx::make_report(dividends ? "harsanyi" : "decomposition",
                              settings, payload)
                  .dump());
  return kOk;
}

struct SuiteArgs {
  std::string models;
  std::string samples = "gaussian:8";
  std::string methods = "all";
  std::string metric = "infidelity";
  std::string out;
  std::string suite = "theorems";
  std::uint64_t seed = 0;
  std::size_t mc_samples = 16;
  std::size_t steps = 300;
  double baseline_sigma = 0.5;
};

std::vector<tx::MethodId> parse_methods(const std::string& text) {
  if (text == "all") return tx::all_methods();
  std::vector<tx::MethodId> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(tx::parse_method(item));
    } catch (const tx::Error& e) {
      throw tx::ConfigError(e.what());
    }
  }
  if (out.empty()) throw tx::ConfigError("empty method list");
  return out;
}

tx::ExperimentConfig suite_config(const SuiteArgs& a, const std::string& suite) {
  tx::ExperimentConfig c;
  c.name = suite;
  c.seed = a.seed;
  c.suites = {suite};
  c.samples = a.samples;
  c.methods = parse_methods(a.methods);
  c.metric = a.metric;
  c.mc_samples = a.mc_samples;
  c.steps = a.steps;
  c.baseline_sigma = a.baseline_sigma;
  if (suite == "audit") {
    c.bundled_models = false;
  } else {
    set_models(c, a.models);
  }
  return c;
}

int run_verify(const SuiteArgs& a) {
  if (a.suite != "theorems" && a.suite != "identities") {
    throw tx::ConfigError("unknown suite '" + a.suite +
                          "' (expected theorems)");
  }
  const tx::Report r = tx::run_experiment(suite_config(a, "identities"));
  const json& ledger = r.payload.at("identities");
  const tx::Report out = tx::make_report("theorem-ledger", r.settings, ledger);
  for (const json& c : ledger.at("checks")) {
    const char* status = c["skipped"].get<bool>()  ? "SKIP"
                         : c["passed"].get<bool>() ? "ok  "
                                                   : "FAIL";
    std::cerr << status << ' ' << c["id"].get<std::string>() << "  residual "
              << c["residual"].dump() << " tol " << c["tolerance"].dump()
              << '\n';
  }
  emit(a.out, ends_with(a.out, ".csv") ? tx::export_plotdata(out, "csv")
                                       : out.dump());
  return kOk;
}

int run_audit(const SuiteArgs& a) {
  const tx::Report r = tx::run_experiment(suite_config(a, "audit"));
  const tx::Report out =
      tx::make_report("principle-matrix", r.settings, r.payload.at("audit"));
  emit(a.out, ends_with(a.out, ".json") ? out.dump()
                                        : tx::export_plotdata(out, "csv"));
  return kOk;
}

int run_evaluate(const SuiteArgs& a) {
  if (a.metric != "infidelity" && a.metric != "bbox") {
    throw tx::ConfigError("unknown metric '" + a.metric +
                          "' (expected infidelity or bbox)");
  }
  const tx::Report r = tx::run_experiment(suite_config(a, "metrics"));
  const tx::Report out = tx::make_report(
      "metric-table", r.settings, json{{"rows", r.payload.at("metrics")}});
  emit(a.out, ends_with(a.out, ".json") ? out.dump()
                                        : tx::export_plotdata(out, "csv"));
  return kOk;
}

int run_export(const std::string& report, const std::string& format,
               const std::string& out) {
  emit(out, tx::export_plotdata(tx::load_report(report), format));
  return kOk;
}

int run_config(const std::string& path, const std::string& out) {
  const tx::ExperimentConfig c = tx::load_config(path);
  const tx::Report r = tx::run_experiment(c);
  std::string target = out.empty() ? c.out : out;
  emit(target, r.dump());
  return kOk;
}

int run_zoo(const std::string& dir, std::uint64_t seed) {
  fs::create_directories(dir);
  for (const tx::Model& m : tx::bundled_models(seed)) {
    const fs::path p = fs::path(dir) / (m.name() + ".txt");
    tx::save_model(m, p.string());
    std::cerr << "wrote " << p.string() << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"taylorx: Taylor interaction analysis of attribution methods"};
  app.require_subcommand(1);
  app.fallthrough();
  std::size_t workers = 0;
  app.add_option("--workers", workers,
                 "Worker threads (default: $TAYLORX_WORKERS or hardware)");

  AttributeArgs at;
  auto* attribute = app.add_subcommand("attribute", "Attribute model outputs");
  attribute->add_option("--method", at.method, "Method id")->required();
  attribute->add_option("--model", at.model, "Model file")->required();
  attribute->add_option("--input", at.input, "Input vectors or IDX file")
      ->required();
  attribute->add_option("--baseline", at.baseline,
                        "fixed:<file> | scalar:<v> | gauss:<sigma>:<seed>");
  attribute->add_option("--out", at.out, "CSV output (default stdout)");
  attribute->add_option("--dump", at.dump, "Also write an attribution-dump report");
  attribute->add_option("--grid", at.grid, "Input grid ROWSxCOLS");
  attribute->add_option("--patch", at.patch, "Occlusion patch ROWSxCOLS");
  attribute->add_option("--steps", at.config.steps, "Path integral steps");
  attribute->add_option("--quadrature", at.quadrature, "midpoint | left | right");
  attribute->add_option("--mc-samples", at.config.samples, "Monte Carlo draws");
  attribute->add_option("--sigma", at.config.sigma, "Sampling sigma");
  attribute->add_option("--seed", at.config.seed, "Sampling seed");
  attribute->add_option("--epsilon", at.config.epsilon, "LRP epsilon");
  attribute->add_option("--alpha", at.config.alpha, "LRP alpha");
  attribute->add_option("--beta", at.config.beta, "LRP beta");

  DecomposeArgs de;
  auto* decompose = app.add_subcommand("decompose", "Taylor expansion terms");
  DecomposeArgs ha;
  auto* harsanyi = app.add_subcommand("harsanyi", "Harsanyi dividends");
  for (auto [cmd, args] : {std::pair{decompose, &de}, std::pair{harsanyi, &ha}}) {
    cmd->add_option("--model", args->model, "Model file")->required();
    cmd->add_option("--input", args->input, "Input vectors or IDX file")
        ->required();
    cmd->add_option("--baseline", args->baseline, "Baseline spec");
    cmd->add_option("--out", args->out, "CSV, or a report when ending in .json");
    cmd->add_option("--sample", args->sample, "Sample index, -1 for all");
  }
  decompose->add_option("--order", de.order, "Expansion order K");
  decompose->add_option("--max-terms", de.max_terms, "Term budget");

  SuiteArgs ve;
  auto* verify = app.add_subcommand("verify", "Check attribution identities");
  verify->add_option("--suite", ve.suite, "theorems");
  verify->add_option("--models", ve.models, "Model dir, file list or bundled");
  verify->add_option("--seed", ve.seed, "Root seed");
  verify->add_option("--baseline-sigma", ve.baseline_sigma, "Baseline spread");
  verify->add_option("--out", ve.out, "Ledger report (.json) or CSV");

  SuiteArgs au;
  auto* audit = app.add_subcommand("audit", "Principle matrix with witnesses");
  audit->add_option("--out", au.out, "CSV, or a report when ending in .json");

  SuiteArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Metric table per method");
  evaluate->add_option("--metric", ev.metric, "infidelity | bbox");
  evaluate->add_option("--methods", ev.methods, "all or a comma list");
  evaluate->add_option("--models", ev.models, "Model dir, file list or bundled");
  evaluate->add_option("--samples", ev.samples,
                       "gaussian:<n> | idx:<file> | file:<path>");
  evaluate->add_option("--mc-samples", ev.mc_samples, "Perturbation draws");
  evaluate->add_option("--steps", ev.steps, "Path integral steps");
  evaluate->add_option("--seed", ev.seed, "Root seed");
  evaluate->add_option("--out", ev.out, "CSV, or a report when ending in .json");

  std::string report_path, format = "csv", export_out;
  auto* exporter = app.add_subcommand("export", "Flatten a report");
  exporter->add_option("--report", report_path, "Report JSON")->required();
  exporter->add_option("--format", format, "csv | json");
  exporter->add_option("--out", export_out, "Output file (default stdout)");

  std::string config_path, run_out;
  auto* run = app.add_subcommand("run", "Run an experiment config file");
  run->add_option("config", config_path, "Config file")->required();
  run->add_option("--out", run_out, "Report path (overrides the config)");

  std::string zoo_dir = "models";
  std::uint64_t zoo_seed = 0;
  auto* zoo = app.add_subcommand("zoo", "Write the bundled demo models");
  zoo->add_option("--out", zoo_dir, "Directory");
  zoo->add_option("--seed", zoo_seed, "Training seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (workers > 0) tx::set_worker_count(workers);
    if (*attribute) return run_attribute(at);
    if (*decompose) return run_decompose(de, false);
    if (*harsanyi) return run_decompose(ha, true);
    if (*verify) return run_verify(ve);
    if (*audit) return run_audit(au);
    if (*evaluate) return run_evaluate(ev);
    if (*exporter) return run_export(report_path, format, export_out);
    if (*run) return run_config(config_path, run_out);
    if (*zoo) return run_zoo(zoo_dir, zoo_seed);
  } catch (const tx::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kHardError;
  }
  return kHardError;
}
