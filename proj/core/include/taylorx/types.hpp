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

#ifndef TAYLORX_TYPES_HPP_
#define TAYLORX_TYPES_HPP_

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace taylorx {

using Vector = std::vector<double>;
using ConstVec = std::span<const double>;

// Maximum number of input variables a VarSet can index.
inline constexpr std::size_t kMaxSetVariables = 64;

// A subset of input variable indices, stored as a bitmask.
class VarSet {
 public:
  VarSet() = default;
  explicit VarSet(std::uint64_t mask) : mask_(mask) {}
  VarSet(std::initializer_list<std::size_t> members);

  static VarSet of(const std::vector<std::size_t>& members);
  static VarSet full(std::size_t n);
  static VarSet singleton(std::size_t i);

  std::uint64_t mask() const { return mask_; }
  bool empty() const { return mask_ == 0; }
  std::size_t size() const { return std::popcount(mask_); }
  bool contains(std::size_t i) const {
    return i < kMaxSetVariables && ((mask_ >> i) & 1u);
  }
  bool intersects(VarSet o) const { return (mask_ & o.mask_) != 0; }
  bool subset_of(VarSet o) const { return (mask_ & ~o.mask_) == 0; }

  VarSet with(std::size_t i) const;
  VarSet without(std::size_t i) const;
  VarSet operator|(VarSet o) const { return VarSet(mask_ | o.mask_); }
  VarSet operator&(VarSet o) const { return VarSet(mask_ & o.mask_); }
  bool operator==(const VarSet&) const = default;
  auto operator<=>(const VarSet&) const = default;

  std::vector<std::size_t> members() const;
  // "{0,2,5}"
  std::string to_string() const;

 private:
  std::uint64_t mask_ = 0;
};

}  // namespace taylorx

#endif  // TAYLORX_TYPES_HPP_
