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

#include "taylorx/types.hpp"

#include <string>
#include <vector>

#include "taylorx/error.hpp"

namespace taylorx {

VarSet::VarSet(std::initializer_list<std::size_t> members) {
  for (std::size_t i : members) *this = with(i);
}

VarSet VarSet::of(const std::vector<std::size_t>& members) {
  VarSet s;
  for (std::size_t i : members) s = s.with(i);
  return s;
}

VarSet VarSet::full(std::size_t n) {
  if (n > kMaxSetVariables) {
    throw DimensionError("variable sets hold at most 64 variables");
  }
  return VarSet(n == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
}

VarSet VarSet::singleton(std::size_t i) { return VarSet().with(i); }

VarSet VarSet::with(std::size_t i) const {
  if (i >= kMaxSetVariables) {
    throw DimensionError("variable index " + std::to_string(i) +
                         " exceeds the 64-variable set limit");
  }
  return VarSet(mask_ | (std::uint64_t{1} << i));
}

VarSet VarSet::without(std::size_t i) const {
  if (i >= kMaxSetVariables) return *this;
  return VarSet(mask_ & ~(std::uint64_t{1} << i));
}

std::vector<std::size_t> VarSet::members() const {
  std::vector<std::size_t> out;
  std::uint64_t m = mask_;
  while (m != 0) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
    m &= m - 1;
  }
  return out;
}

std::string VarSet::to_string() const {
  std::string s = "{";
  bool first = true;
  for (std::size_t i : members()) {
    if (!first) s += ',';
    s += std::to_string(i);
    first = false;
  }
  return s + "}";
}

}  // namespace taylorx
