// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace evoc {

/// Worker count: hardware concurrency, capped by the EVOC_THREADS
/// environment variable when set. Always >= 1.
unsigned worker_count();

/// Runs body(begin, end) over disjoint contiguous chunks of [0, n). Callers
/// must only write to state owned by their chunk so that results do not
/// depend on the number of workers.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace evoc
