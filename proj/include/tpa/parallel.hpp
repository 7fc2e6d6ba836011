#pragma once

#include <cstddef>
#include <functional>

namespace tpa {

// Worker count for face/tube/trial loops: TPROD_THREADS if set (clamped to
// [1, hardware_concurrency]), otherwise 1. Unparseable values mean 1.
int thread_count();

// Runs body(i) for i in [0, n). Iterations must be independent; each writes
// only its own output slot, so results do not depend on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace tpa
