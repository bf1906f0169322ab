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

#ifndef TAYLORX_RANDOM_HPP_
#define TAYLORX_RANDOM_HPP_

#include <cstdint>
#include <random>
#include <string_view>

namespace taylorx {

// Derives an independent 64-bit seed for a named stream. Every sampling
// site draws from its own stream so that adding a site elsewhere does not
// shift previously recorded draws.
std::uint64_t substream_seed(std::uint64_t root, std::string_view name,
                             std::uint64_t index = 0);

// Engine seeded from substream_seed.
std::mt19937_64 make_engine(std::uint64_t root, std::string_view name,
                            std::uint64_t index = 0);

// FNV-1a over bytes. Used for configuration hashes.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace taylorx

#endif  // TAYLORX_RANDOM_HPP_
