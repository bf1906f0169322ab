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

#include "taylorx/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "taylorx/error.hpp"
#include "taylorx/jet.hpp"

namespace taylorx {

DegreeVector::DegreeVector(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end());
  for (const Entry& e : entries) {
    if (e.second == 0) continue;
    if (!entries_.empty() && entries_.back().first == e.first) {
      entries_.back().second += e.second;
    } else {
      entries_.push_back(e);
    }
  }
}

DegreeVector DegreeVector::unit(std::size_t i) {
  return DegreeVector({{static_cast<std::uint32_t>(i), 1u}});
}

DegreeVector DegreeVector::from_dense(std::span<const std::uint8_t> exponents) {
  DegreeVector d;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] > 0) {
      d.entries_.emplace_back(static_cast<std::uint32_t>(i), exponents[i]);
    }
  }
  return d;
}

DegreeVector DegreeVector::from_dense(const std::vector<int>& exponents) {
  std::vector<Entry> e;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] < 0) throw Error("negative exponent in degree vector");
    if (exponents[i] > 0) {
      e.emplace_back(static_cast<std::uint32_t>(i),
                     static_cast<std::uint32_t>(exponents[i]));
    }
  }
  return DegreeVector(std::move(e));
}

DegreeVector DegreeVector::parse(const std::string& text) {
  std::vector<Entry> e;
  std::stringstream ss(text);
  std::string item;
  auto digits = [](const std::string& s) {
    return !s.empty() && s.size() <= 9 &&
           s.find_first_not_of("0123456789") == std::string::npos;
  };
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    auto colon = item.find(':');
    const std::string index = item.substr(0, colon);
    const std::string power =
        colon == std::string::npos ? "" : item.substr(colon + 1);
    if (!digits(index) || !digits(power)) {
      throw Error("degree vector entry '" + item + "' is not index:exponent");
    }
    const auto i = static_cast<std::uint32_t>(std::stoul(index));
    for (const Entry& prev : e) {
      if (prev.first == i) {
        throw Error("degree vector repeats variable " + index);
      }
    }
    e.emplace_back(i, static_cast<std::uint32_t>(std::stoul(power)));
  }
  return DegreeVector(std::move(e));
}

int DegreeVector::order() const {
  int d = 0;
  for (const Entry& e : entries_) d += static_cast<int>(e.second);
  return d;
}

int DegreeVector::exponent(std::size_t i) const {
  for (const Entry& e : entries_) {
    if (e.first == i) return static_cast<int>(e.second);
  }
  return 0;
}

VarSet DegreeVector::receptive_field() const {
  VarSet s;
  for (const Entry& e : entries_) s = s.with(e.first);
  return s;
}

int DegreeVector::order_within(VarSet group) const {
  int d = 0;
  for (const Entry& e : entries_) {
    if (group.contains(e.first)) d += static_cast<int>(e.second);
  }
  return d;
}

bool DegreeVector::is_unit(std::size_t i) const {
  return entries_.size() == 1 && entries_[0].first == i &&
         entries_[0].second == 1;
}

double DegreeVector::factorial() const {
  double f = 1.0;
  for (const Entry& e : entries_) {
    for (std::uint32_t k = 2; k <= e.second; ++k) f *= k;
  }
  return f;
}

std::string DegreeVector::to_string() const {
  std::string s;
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    if (k > 0) s += ';';
    s += std::to_string(entries_[k].first) + ":" +
         std::to_string(entries_[k].second);
  }
  return s;
}

TaylorDecomposition::TaylorDecomposition(Vector sample, Vector expansion_point,
                                         int order, double f_sample,
                                         double f_expansion,
                                         std::vector<TaylorTerm> terms,
                                         bool piecewise_local)
    : sample_(std::move(sample)),
      expansion_(std::move(expansion_point)),
      order_(order),
      f_sample_(f_sample),
      f_expansion_(f_expansion),
      terms_(std::move(terms)),
      piecewise_(piecewise_local) {}

double TaylorDecomposition::term_sum() const {
  double s = 0.0;
  for (const TaylorTerm& t : terms_) s += t.value;
  return s;
}

double TaylorDecomposition::residual() const {
  return f_sample_ - f_expansion_ - term_sum();
}

const TaylorTerm* TaylorDecomposition::find(const DegreeVector& kappa) const {
  for (const TaylorTerm& t : terms_) {
    if (t.kappa == kappa) return &t;
  }
  return nullptr;
}

double TaylorDecomposition::independent_effect(const DegreeVector& kappa) const {
  if (kappa.field_size() != 1) {
    throw Error("independent effects need a single-variable degree vector");
  }
  const TaylorTerm* t = find(kappa);
  if (t == nullptr) {
    throw Error("degree vector " + kappa.to_string() +
                " is outside the expansion");
  }
  return t->value;
}

double TaylorDecomposition::generic_independent_effect(std::size_t i) const {
  if (i >= num_variables()) throw DimensionError("variable index out of range");
  return field_effect(VarSet::singleton(i));
}

double TaylorDecomposition::interaction_effect(VarSet s) const {
  if (s.size() < 2) {
    throw Error("interaction effects need at least two variables");
  }
  return field_effect(s);
}

double TaylorDecomposition::field_effect(VarSet s) const {
  double sum = 0.0;
  for (const TaylorTerm& t : terms_) {
    if (t.kappa.receptive_field() == s) sum += t.value;
  }
  return sum;
}

TaylorDecomposition expand(const Model& model, ConstVec x, ConstVec b,
                           int order, const ExpandOptions& options) {
  const std::size_t n = model.num_inputs();
  require_size(x, n, "sample");
  require_size(b, n, "expansion point");
  if (order < 1) throw Error("expansion order must be >= 1");
  if (n > kMaxSetVariables) {
    throw DimensionError("expansions support at most 64 variables");
  }
  auto basis = MonomialBasis::make(n, order, options.max_terms + 1);
  Jet jet = evaluate_jet(model, basis, b);

  std::vector<TaylorTerm> terms;
  terms.reserve(basis->size() - 1);
  for (std::size_t m = 1; m < basis->size(); ++m) {
    auto e = basis->exponents(m);
    TaylorTerm t;
    t.kappa = DegreeVector::from_dense(e);
    const double fact = t.kappa.factorial();
    t.coefficient = 1.0 / fact;
    t.derivative = jet[m] * fact;
    double pi = 1.0;
    for (auto [i, k] : t.kappa.entries()) {
      pi *= std::pow(x[i] - b[i], static_cast<double>(k));
    }
    t.displacement = pi;
    t.value = t.coefficient * t.derivative * t.displacement;
    terms.push_back(std::move(t));
  }
  bool piecewise = false;
  if (model.has_layers()) {
    for (const DenseLayer& l : model.layers()) {
      piecewise = piecewise || l.activation.is_piecewise();
    }
  }
  return TaylorDecomposition(Vector(x.begin(), x.end()),
                             Vector(b.begin(), b.end()), order,
                             model.evaluate(x), model.evaluate(b),
                             std::move(terms), piecewise);
}

std::string to_csv(const TaylorDecomposition& d) {
  std::ostringstream out;
  out.precision(17);
  out << "kappa,order,field,coefficient,derivative,displacement,value\n";
  for (const TaylorTerm& t : d.terms()) {
    std::string field = t.kappa.receptive_field().to_string();
    std::replace(field.begin(), field.end(), ',', ' ');
    out << t.kappa.to_string() << ',' << t.kappa.order() << ',' << field
        << ',' << t.coefficient << ',' << t.derivative << ','
        << t.displacement << ',' << t.value << '\n';
  }
  return out.str();
}

}  // namespace taylorx
