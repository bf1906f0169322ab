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

#include "taylorx/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "taylorx/error.hpp"

namespace taylorx {
namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

[[noreturn]] void fail(std::size_t line, const std::string& key,
                       const std::string& message) {
  throw ConfigError("config line " + std::to_string(line) + " [" + key +
                    "]: " + message);
}

std::uint64_t to_uint(const std::string& v, std::size_t line,
                      const std::string& key) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
    fail(line, key, "'" + v + "' is not a non-negative integer");
  }
  errno = 0;
  std::uint64_t r = std::strtoull(v.c_str(), nullptr, 10);
  if (errno == ERANGE) fail(line, key, "value out of range");
  return r;
}

double to_double(const std::string& v, std::size_t line,
                 const std::string& key) {
  errno = 0;
  char* end = nullptr;
  double r = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE ||
      !std::isfinite(r)) {
    fail(line, key, "'" + v + "' is not a finite number");
  }
  return r;
}

std::string resolve(const std::string& path, const std::string& base) {
  std::filesystem::path p(path);
  if (p.is_absolute() || base.empty() || base == ".") return path;
  return (std::filesystem::path(base) / p).lexically_normal().string();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text,
                              const std::string& base_dir) {
  ExperimentConfig c;
  c.base_dir = base_dir;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  bool methods_set = false;
  while (std::getline(in, raw)) {
    ++line;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    std::string s = trim(raw);
    if (s.empty()) continue;
    auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, s, "expected key = value");
    std::string key = trim(std::string_view(s).substr(0, eq));
    std::string value = trim(std::string_view(s).substr(eq + 1));
    if (key == "name") {
      if (value.empty()) fail(line, key, "empty name");
      c.name = value;
    } else if (key == "seed") {
      c.seed = to_uint(value, line, key);
    } else if (key == "models") {
      c.models.clear();
      c.bundled_models = false;
      for (const std::string& m : split_list(value)) {
        if (m == "bundled") {
          c.bundled_models = true;
        } else {
          c.models.push_back(resolve(m, base_dir));
        }
      }
      if (!c.bundled_models && c.models.empty()) fail(line, key, "no models");
    } else if (key == "samples") {
      auto colon = value.find(':');
      std::string kind = value.substr(0, colon);
      if (colon == std::string::npos) fail(line, key, "expected kind:argument");
      std::string arg = value.substr(colon + 1);
      if (kind == "gaussian") {
        if (to_uint(arg, line, key) == 0) fail(line, key, "count must be > 0");
        c.samples = value;
      } else if (kind == "idx" || kind == "file") {
        if (arg.empty()) fail(line, key, "missing path");
        c.samples = kind + ":" + resolve(arg, base_dir);
      } else {
        fail(line, key, "unknown sample source '" + kind + "'");
      }
    } else if (key == "suites") {
      c.suites.clear();
      for (std::string s2 : split_list(value)) {
        if (s2 == "theorems") s2 = "identities";
        if (s2 != "fit" && s2 != "identities" && s2 != "audit" &&
            s2 != "metrics") {
          fail(line, key, "unknown suite '" + s2 + "'");
        }
        c.suites.push_back(s2);
      }
    } else if (key == "methods") {
      methods_set = true;
      c.methods.clear();
      if (value == "all") {
        c.methods = all_methods();
      } else {
        for (const std::string& m : split_list(value)) {
          try {
            c.methods.push_back(parse_method(m));
          } catch (const Error& e) {
            fail(line, key, e.what());
          }
        }
      }
      if (c.methods.empty()) fail(line, key, "no methods");
    } else if (key == "orders") {
      c.orders.clear();
      for (const std::string& k : split_list(value)) {
        std::uint64_t order = to_uint(k, line, key);
        if (order < 1 || order > 8) fail(line, key, "orders must be in 1..8");
        c.orders.push_back(static_cast<int>(order));
      }
      if (c.orders.empty()) fail(line, key, "no orders");
    } else if (key == "baseline_sigma") {
      c.baseline_sigma = to_double(value, line, key);
      if (c.baseline_sigma < 0) fail(line, key, "must be >= 0");
    } else if (key == "steps") {
      c.steps = to_uint(value, line, key);
      if (c.steps == 0) fail(line, key, "must be > 0");
    } else if (key == "quadrature") {
      try {
        c.quadrature = parse_quadrature(value);
      } catch (const Error& e) {
        fail(line, key, e.what());
      }
    } else if (key == "mc_samples") {
      c.mc_samples = to_uint(value, line, key);
      if (c.mc_samples == 0) fail(line, key, "must be > 0");
    } else if (key == "mc_sigma") {
      c.mc_sigma = to_double(value, line, key);
      if (c.mc_sigma < 0) fail(line, key, "must be >= 0");
    } else if (key == "metric") {
      if (value != "infidelity" && value != "bbox") {
        fail(line, key, "expected infidelity or bbox");
      }
      c.metric = value;
    } else if (key == "workers") {
      c.workers = to_uint(value, line, key);
    } else if (key == "out") {
      c.out = resolve(value, base_dir);
    } else {
      fail(line, key, "unknown key");
    }
  }
  if (!methods_set) c.methods = all_methods();
  if (c.suites.empty()) c.suites = {"fit"};
  if (c.models.empty() && !c.bundled_models) c.bundled_models = true;
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string base = std::filesystem::path(path).parent_path().string();
  return parse_config(ss.str(), base.empty() ? "." : base);
}

std::string canonical_config(const ExperimentConfig& c) {
  // workers and out do not influence results and stay out of the hash.
  std::ostringstream out;
  out << "name = " << c.name << "\nseed = " << c.seed << "\nmodels = ";
  bool first = true;
  if (c.bundled_models) {
    out << "bundled";
    first = false;
  }
  for (const std::string& m : c.models) {
    out << (first ? "" : ",") << m;
    first = false;
  }
  out << "\nsamples = " << c.samples << "\nsuites = ";
  for (std::size_t i = 0; i < c.suites.size(); ++i) {
    out << (i ? "," : "") << c.suites[i];
  }
  out << "\nmethods = ";
  for (std::size_t i = 0; i < c.methods.size(); ++i) {
    out << (i ? "," : "") << method_name(c.methods[i]);
  }
  out << "\norders = ";
  for (std::size_t i = 0; i < c.orders.size(); ++i) {
    out << (i ? "," : "") << c.orders[i];
  }
  out << "\nbaseline_sigma = " << fmt(c.baseline_sigma)
      << "\nsteps = " << c.steps
      << "\nquadrature = " << to_string(c.quadrature)
      << "\nmc_samples = " << c.mc_samples
      << "\nmc_sigma = " << fmt(c.mc_sigma) << "\nmetric = " << c.metric
      << "\n";
  return out.str();
}

}  // namespace taylorx
