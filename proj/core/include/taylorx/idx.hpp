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

#ifndef TAYLORX_IDX_HPP_
#define TAYLORX_IDX_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "taylorx/types.hpp"

namespace taylorx {

// Decoded IDX array. values holds every element scaled to [0, 1]: unsigned
// bytes are divided by 255, signed bytes shifted by 128 first, and wider
// types are min-max scaled over the whole array.
struct IdxArray {
  std::uint8_t type_code = 0x08;
  std::vector<std::size_t> dims;
  Vector values;
  // Unscaled element values.
  Vector raw;

  std::size_t count() const { return dims.empty() ? 0 : dims[0]; }
  std::size_t item_size() const;
  // Scaled elements of item i (a row of the first dimension).
  Vector item(std::size_t i) const;
};

// Raises BinaryFormatError on a bad magic number, unknown type code,
// truncated payload, or more than max_elements elements.
IdxArray parse_idx(std::span<const std::uint8_t> bytes,
                   std::size_t max_elements = std::size_t{1} << 28);
IdxArray read_idx(const std::string& path,
                  std::size_t max_elements = std::size_t{1} << 28);

}  // namespace taylorx

#endif  // TAYLORX_IDX_HPP_
