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

#ifndef TAYLORX_PARALLEL_HPP_
#define TAYLORX_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace taylorx {

// Number of worker threads used by parallel_for. Reads TAYLORX_WORKERS the
// first time it is queried; set_worker_count overrides it. Always >= 1.
std::size_t worker_count();
void set_worker_count(std::size_t workers);

// Runs body(i) for i in [0, n). Each index is processed exactly once and
// bodies write only to their own slots, so results do not depend on the
// worker count. The first exception thrown is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace taylorx

#endif  // TAYLORX_PARALLEL_HPP_
