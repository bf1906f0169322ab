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

#ifndef TAYLORX_CONFIG_HPP_
#define TAYLORX_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "taylorx/attribution.hpp"

namespace taylorx {

// key = value lines, '#' comments. Keys:
//   name, seed, models (comma list of model files, or "bundled"),
//   samples (gaussian:<count> | idx:<file> | file:<path>),
//   suites (comma list of fit, identities, audit, metrics),
//   methods (all or comma list), orders (comma list of K),
//   baseline_sigma, steps, quadrature, mc_samples, mc_sigma,
//   metric (infidelity | bbox), workers, out.
// Relative paths resolve against the config file's directory.
struct ExperimentConfig {
  std::string name = "experiment";
  std::uint64_t seed = 0;
  std::vector<std::string> models;
  bool bundled_models = false;
  std::string samples = "gaussian:8";
  std::vector<std::string> suites;
  std::vector<MethodId> methods;
  std::vector<int> orders = {2};
  double baseline_sigma = 0.1;
  std::size_t steps = 300;
  Quadrature quadrature = Quadrature::kMidpoint;
  std::size_t mc_samples = 16;
  double mc_sigma = 0.1;
  std::string metric = "infidelity";
  std::size_t workers = 0;  // 0 keeps the process-wide setting
  std::string out;
  std::string base_dir = ".";
};

// Raises ConfigError with the line number on unknown keys or bad values.
ExperimentConfig parse_config(std::string_view text,
                              const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

// Canonical key = value rendering used for hashing.
std::string canonical_config(const ExperimentConfig& config);

}  // namespace taylorx

#endif  // TAYLORX_CONFIG_HPP_
