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

#include "taylorx/baseline_spec.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "taylorx/error.hpp"
#include "taylorx/model.hpp"
#include "taylorx/random.hpp"

namespace taylorx {
namespace {

double number(const std::string& s, const std::string& what) {
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE ||
      !std::isfinite(v)) {
    throw ConfigError("baseline: '" + s + "' is not a valid " + what);
  }
  return v;
}

}  // namespace

std::vector<Vector> read_vectors(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open vector file " + path);
  std::vector<Vector> out;
  std::string line;
  std::size_t number_of_line = 0;
  while (std::getline(in, line)) {
    ++number_of_line;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    for (char& c : line) {
      if (c == ',' || c == '\t' || c == '\r') c = ' ';
    }
    std::istringstream row(line);
    std::string tok;
    Vector v;
    while (row >> tok) {
      errno = 0;
      char* end = nullptr;
      double d = std::strtod(tok.c_str(), &end);
      if (end != tok.c_str() + tok.size() || errno == ERANGE ||
          !std::isfinite(d)) {
        throw ParseError(path, number_of_line, "value",
                         "'" + tok + "' is not a finite number");
      }
      v.push_back(d);
    }
    if (v.empty()) continue;
    if (!out.empty() && v.size() != out.front().size()) {
      throw ParseError(path, number_of_line, "value",
                       "row has " + std::to_string(v.size()) +
                           " values, expected " +
                           std::to_string(out.front().size()));
    }
    out.push_back(std::move(v));
  }
  return out;
}

BaselineSpec parse_baseline_spec(const std::string& text) {
  BaselineSpec spec;
  spec.text = text;
  auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw ConfigError("baseline '" + text +
                      "': expected fixed:<file>, scalar:<v> or "
                      "gauss:<sigma>:<seed>");
  }
  std::string head = text.substr(0, colon);
  std::string rest = text.substr(colon + 1);
  if (head == "fixed") {
    spec.kind = BaselineSpec::Kind::kFixed;
    std::vector<Vector> rows;
    try {
      rows = read_vectors(rest);
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(std::string("baseline: ") + e.what());
    }
    if (rows.size() != 1) {
      throw ConfigError("baseline file " + rest + " must hold exactly one row");
    }
    spec.fixed = rows.front();
  } else if (head == "scalar") {
    spec.kind = BaselineSpec::Kind::kScalar;
    spec.scalar = number(rest, "scalar");
  } else if (head == "gauss") {
    spec.kind = BaselineSpec::Kind::kGauss;
    auto second = rest.find(':');
    if (second == std::string::npos) {
      throw ConfigError("baseline '" + text + "': expected gauss:<sigma>:<seed>");
    }
    spec.sigma = number(rest.substr(0, second), "sigma");
    if (spec.sigma < 0.0) throw ConfigError("baseline: sigma must be >= 0");
    std::string seed = rest.substr(second + 1);
    if (seed.empty() || seed.find_first_not_of("0123456789") != std::string::npos) {
      throw ConfigError("baseline: seed '" + seed + "' is not an integer");
    }
    errno = 0;
    spec.seed = std::strtoull(seed.c_str(), nullptr, 10);
    if (errno == ERANGE) throw ConfigError("baseline: seed out of range");
  } else {
    throw ConfigError("baseline '" + text + "': unknown kind '" + head + "'");
  }
  return spec;
}

Vector resolve_baseline(const BaselineSpec& spec, ConstVec x,
                        std::size_t sample_index) {
  switch (spec.kind) {
    case BaselineSpec::Kind::kFixed:
      require_size(spec.fixed, x.size(), "baseline");
      return spec.fixed;
    case BaselineSpec::Kind::kScalar:
      return Vector(x.size(), spec.scalar);
    case BaselineSpec::Kind::kGauss: {
      auto rng = make_engine(spec.seed, "baseline", sample_index);
      std::normal_distribution<double> noise(0.0, 1.0);
      Vector b(x.begin(), x.end());
      for (double& v : b) v += spec.sigma * noise(rng);
      return b;
    }
  }
  return {};
}

}  // namespace taylorx
