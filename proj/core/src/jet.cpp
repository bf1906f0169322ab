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

#include "taylorx/jet.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "taylorx/error.hpp"

namespace taylorx {
namespace {

void compositions(std::size_t n, int d, std::vector<std::uint8_t>& cur,
                  std::size_t pos, std::vector<std::uint8_t>& out) {
  if (pos + 1 == n) {
    cur[pos] = static_cast<std::uint8_t>(d);
    out.insert(out.end(), cur.begin(), cur.end());
    return;
  }
  for (int e = d; e >= 0; --e) {
    cur[pos] = static_cast<std::uint8_t>(e);
    compositions(n, d - e, cur, pos + 1, out);
  }
}

void require_same_basis(const MonomialBasis& a, const MonomialBasis& b) {
  if (&a != &b && (a.num_variables() != b.num_variables() ||
                   a.order() != b.order())) {
    throw DimensionError("jets over different bases");
  }
}

}  // namespace

std::size_t count_terms(std::size_t n, int order) {
  if (order <= 0) return 0;
  // C(n + K, K) built incrementally; each partial product is an integer.
  std::size_t c = 1;
  for (int k = 1; k <= order; ++k) {
    const std::size_t num = n + static_cast<std::size_t>(k);
    if (c > std::numeric_limits<std::size_t>::max() / num) {
      return std::numeric_limits<std::size_t>::max();
    }
    c = c * num / static_cast<std::size_t>(k);
  }
  return c - 1;
}

std::shared_ptr<const MonomialBasis> MonomialBasis::make(std::size_t n,
                                                         int order,
                                                         std::size_t max_size) {
  if (n == 0) throw DimensionError("basis needs at least one variable");
  if (order < 0 || order > 255) throw Error("expansion order out of range");
  const std::size_t terms = count_terms(n, order);
  if (terms == std::numeric_limits<std::size_t>::max() ||
      terms + 1 > max_size) {
    throw BudgetError("order-" + std::to_string(order) + " expansion over " +
                      std::to_string(n) + " variables needs " +
                      (terms == std::numeric_limits<std::size_t>::max()
                           ? std::string("too many")
                           : std::to_string(terms)) +
                      " terms, limit " + std::to_string(max_size - 1));
  }
  auto basis = std::shared_ptr<MonomialBasis>(new MonomialBasis());
  basis->n_ = n;
  basis->order_ = order;
  basis->exponents_.reserve((terms + 1) * n);
  std::vector<std::uint8_t> cur(n, 0);
  std::vector<std::size_t> degree_end;
  for (int d = 0; d <= order; ++d) {
    std::size_t before = basis->exponents_.size() / n;
    compositions(n, d, cur, 0, basis->exponents_);
    std::size_t after = basis->exponents_.size() / n;
    basis->degrees_.insert(basis->degrees_.end(), after - before, d);
    degree_end.push_back(after);
  }
  const std::size_t size = basis->degrees_.size();

  std::unordered_map<std::string, std::uint32_t> index;
  index.reserve(size * 2);
  auto key = [&](const std::uint8_t* e) {
    return std::string(reinterpret_cast<const char*>(e), n);
  };
  for (std::size_t m = 0; m < size; ++m) {
    index.emplace(key(basis->exponents_.data() + m * n),
                  static_cast<std::uint32_t>(m));
  }
  std::vector<std::uint8_t> sum(n);
  for (std::size_t a = 0; a < size; ++a) {
    const int room = order - basis->degrees_[a];
    const std::uint8_t* ea = basis->exponents_.data() + a * n;
    for (std::size_t b = 0; b < degree_end[room]; ++b) {
      const std::uint8_t* eb = basis->exponents_.data() + b * n;
      for (std::size_t i = 0; i < n; ++i) sum[i] = ea[i] + eb[i];
      basis->products_.push_back(
          {static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
           index.at(key(sum.data()))});
    }
  }
  return basis;
}

Jet::Jet(std::shared_ptr<const MonomialBasis> basis)
    : basis_(std::move(basis)), coef_(basis_->size(), 0.0) {}

Jet Jet::constant(std::shared_ptr<const MonomialBasis> basis, double c) {
  Jet j(std::move(basis));
  j.coef_[0] = c;
  return j;
}

Jet Jet::variable(std::shared_ptr<const MonomialBasis> basis, std::size_t i,
                  double value) {
  if (i >= basis->num_variables()) throw DimensionError("jet variable index");
  Jet j(std::move(basis));
  j.coef_[0] = value;
  if (j.basis_->order() >= 1) j.coef_[1 + i] = 1.0;
  return j;
}

Jet& Jet::operator+=(const Jet& o) {
  require_same_basis(*basis_, *o.basis_);
  for (std::size_t m = 0; m < coef_.size(); ++m) coef_[m] += o.coef_[m];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  require_same_basis(*basis_, *o.basis_);
  for (std::size_t m = 0; m < coef_.size(); ++m) coef_[m] -= o.coef_[m];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& c : coef_) c *= s;
  return *this;
}

Jet& Jet::add_scaled(const Jet& o, double s) {
  require_same_basis(*basis_, *o.basis_);
  for (std::size_t m = 0; m < coef_.size(); ++m) coef_[m] += s * o.coef_[m];
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  require_same_basis(*a.basis_, *b.basis_);
  Jet out(a.basis_);
  const double* x = a.coef_.data();
  const double* y = b.coef_.data();
  double* z = out.coef_.data();
  for (const MonomialBasis::Product& p : a.basis_->products()) {
    z[p.out] += x[p.lhs] * y[p.rhs];
  }
  return out;
}

Jet Jet::compose(const Vector& series) const {
  Jet delta = *this;
  delta.coef_[0] = 0.0;
  Jet out = constant(basis_, series.empty() ? 0.0 : series[0]);
  const int order = basis_->order();
  Jet power = delta;
  for (int k = 1; k <= order && k < static_cast<int>(series.size()); ++k) {
    if (series[k] != 0.0) out.add_scaled(power, series[k]);
    if (k < order) power = power * delta;
  }
  return out;
}

Jet Jet::apply(const Activation& activation) const {
  if (activation.kind == ActivationKind::kIdentity) return *this;
  return compose(activation.series(coef_[0], basis_->order()));
}

Jet evaluate_jet(const Model& model,
                 const std::shared_ptr<const MonomialBasis>& basis,
                 ConstVec at) {
  require_size(at, model.num_inputs(), "expansion point");
  if (basis->num_variables() != model.num_inputs()) {
    throw DimensionError("basis size does not match the model inputs");
  }
  std::vector<Jet> vars;
  vars.reserve(at.size());
  for (std::size_t i = 0; i < at.size(); ++i) {
    vars.push_back(Jet::variable(basis, i, at[i]));
  }
  if (model.kind() == ModelKind::kPolynomial) {
    const Polynomial& p = model.poly();
    Jet out = Jet::constant(basis, p.constant);
    for (const Monomial& m : p.terms) {
      Jet t = Jet::constant(basis, m.coefficient);
      for (auto [i, e] : m.powers) {
        for (int k = 0; k < e; ++k) t = t * vars[i];
      }
      out += t;
    }
    return out;
  }
  std::vector<Jet> cur = std::move(vars);
  for (const DenseLayer& layer : model.layers()) {
    std::vector<Jet> next;
    next.reserve(layer.outputs());
    for (std::size_t j = 0; j < layer.outputs(); ++j) {
      Jet u = Jet::constant(basis, layer.bias[j]);
      for (std::size_t i = 0; i < layer.inputs(); ++i) {
        double w = layer.weights(j, i);
        if (w != 0.0) u.add_scaled(cur[i], w);
      }
      next.push_back(u.apply(layer.activation));
    }
    cur = std::move(next);
  }
  return cur.front();
}

}  // namespace taylorx
