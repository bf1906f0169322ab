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

#include "taylorx/idx.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "taylorx/error.hpp"

namespace taylorx {
namespace {

std::size_t element_size(std::uint8_t code) {
  switch (code) {
    case 0x08:
    case 0x09:
      return 1;
    case 0x0B:
      return 2;
    case 0x0C:
    case 0x0D:
      return 4;
    case 0x0E:
      return 8;
    default:
      return 0;
  }
}

std::uint64_t read_be(const std::uint8_t* p, std::size_t size) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < size; ++i) v = (v << 8) | p[i];
  return v;
}

double decode(std::uint8_t code, const std::uint8_t* p) {
  switch (code) {
    case 0x08:
      return p[0];
    case 0x09:
      return static_cast<std::int8_t>(p[0]);
    case 0x0B:
      return static_cast<std::int16_t>(read_be(p, 2));
    case 0x0C:
      return static_cast<std::int32_t>(read_be(p, 4));
    case 0x0D:
      return std::bit_cast<float>(static_cast<std::uint32_t>(read_be(p, 4)));
    default:
      return std::bit_cast<double>(read_be(p, 8));
  }
}

}  // namespace

std::size_t IdxArray::item_size() const {
  std::size_t s = 1;
  for (std::size_t d = 1; d < dims.size(); ++d) s *= dims[d];
  return s;
}

Vector IdxArray::item(std::size_t i) const {
  if (i >= count()) throw DimensionError("idx item index out of range");
  std::size_t s = item_size();
  return Vector(values.begin() + i * s, values.begin() + (i + 1) * s);
}

IdxArray parse_idx(std::span<const std::uint8_t> bytes,
                   std::size_t max_elements) {
  if (bytes.size() < 4) throw BinaryFormatError(bytes.size(), "truncated header");
  if (bytes[0] != 0 || bytes[1] != 0) {
    throw BinaryFormatError(0, "bad magic number");
  }
  IdxArray out;
  out.type_code = bytes[2];
  std::size_t esize = element_size(out.type_code);
  if (esize == 0) throw BinaryFormatError(2, "unknown type code");
  std::size_t ndims = bytes[3];
  if (ndims == 0) throw BinaryFormatError(3, "zero dimensions");
  std::size_t offset = 4;
  std::size_t total = 1;
  for (std::size_t d = 0; d < ndims; ++d) {
    if (offset + 4 > bytes.size()) {
      throw BinaryFormatError(bytes.size(), "truncated dimension list");
    }
    std::size_t dim = read_be(bytes.data() + offset, 4);
    if (dim != 0 && total > max_elements / dim) {
      throw BinaryFormatError(offset, "more than the allowed element count");
    }
    total *= dim;
    out.dims.push_back(dim);
    offset += 4;
  }
  if (total > max_elements) {
    throw BinaryFormatError(4, "more than the allowed element count");
  }
  if (bytes.size() - offset < total * esize) {
    throw BinaryFormatError(bytes.size(), "truncated payload");
  }
  out.raw.resize(total);
  for (std::size_t i = 0; i < total; ++i) {
    double v = decode(out.type_code, bytes.data() + offset + i * esize);
    if (!std::isfinite(v)) {
      throw BinaryFormatError(offset + i * esize, "non-finite element");
    }
    out.raw[i] = v;
  }
  out.values.resize(total);
  if (out.type_code == 0x08) {
    for (std::size_t i = 0; i < total; ++i) out.values[i] = out.raw[i] / 255.0;
  } else if (out.type_code == 0x09) {
    for (std::size_t i = 0; i < total; ++i) {
      out.values[i] = (out.raw[i] + 128.0) / 255.0;
    }
  } else if (total > 0) {
    auto [lo, hi] = std::minmax_element(out.raw.begin(), out.raw.end());
    double span = *hi - *lo;
    for (std::size_t i = 0; i < total; ++i) {
      out.values[i] = span > 0.0 ? (out.raw[i] - *lo) / span : 0.0;
    }
  }
  return out;
}

IdxArray read_idx(const std::string& path, std::size_t max_elements) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open idx file " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return parse_idx(bytes, max_elements);
}

}  // namespace taylorx
