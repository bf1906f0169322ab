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

#ifndef TAYLORX_REPORT_HPP_
#define TAYLORX_REPORT_HPP_

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "taylorx/attribution.hpp"
#include "taylorx/config.hpp"
#include "taylorx/harsanyi.hpp"
#include "taylorx/metrics.hpp"
#include "taylorx/model.hpp"
#include "taylorx/principles.hpp"
#include "taylorx/taylor.hpp"
#include "taylorx/unification.hpp"

namespace taylorx {

inline constexpr const char* kVersion = "0.1.0";

// Machine-readable result. kind is one of attribution-dump, decomposition,
// harsanyi, fit, theorem-ledger, principle-matrix, metric-table, experiment.
struct Report {
  std::string kind;
  std::string version = kVersion;
  std::string config_hash;
  nlohmann::json settings = nlohmann::json::object();
  nlohmann::json payload = nlohmann::json::object();

  nlohmann::json to_json() const;
  static Report from_json(const nlohmann::json& j);
  std::string dump() const;
};

// config_hash is FNV-1a over the canonical settings dump.
Report make_report(std::string kind, nlohmann::json settings,
                   nlohmann::json payload);
Report load_report(const std::string& path);
void save_report(const Report& report, const std::string& path);

nlohmann::json to_json(const AttributionResult& r);
nlohmann::json to_json(const TaylorDecomposition& d);
nlohmann::json to_json(const HarsanyiTable& t);
nlohmann::json to_json(const FitReport& r);
nlohmann::json to_json(const IdentityLedger& l);
nlohmann::json to_json(const std::vector<PrincipleVerdict>& v);
nlohmann::json to_json(const std::vector<CorrelationRow>& rows);
nlohmann::json to_json(const Witness& w);

// Flattens a report to CSV (format "csv") or returns the JSON document
// ("json"):
//   fit               method,order,error_percent
//   attribution-dump  row,col,value (payload.grid gives the shape)
//   metric-table      model,method,principle_count,metric,value,status
//   theorem-ledger    id,residual,tolerance,passed
//   principle-matrix  method, principle columns, count
//   experiment        section,item,order,value
//   decomposition     kappa,order,field,coefficient,derivative,displacement,value
//   harsanyi          subset,size,dividend
// Raises Error on an unknown format and UnsupportedError when a kind has no
// CSV form.
std::string export_plotdata(const Report& report, const std::string& format);

// The bundled demo zoo: polynomials, sigmoid / softplus / ReLU MLPs and a
// tiny CNN, trained deterministically from `seed`.
std::vector<Model> bundled_models(std::uint64_t seed);

// Runs the configured suites. Deterministic in config.seed.
Report run_experiment(const ExperimentConfig& config);

// "%.17g"
std::string format_double(double v);

}  // namespace taylorx

#endif  // TAYLORX_REPORT_HPP_
