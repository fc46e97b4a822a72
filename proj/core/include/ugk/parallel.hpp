#pragma once

#include <cstddef>
#include <functional>

namespace ugk {

/// Worker count: UGK_THREADS if set and positive, else hardware concurrency.
std::size_t default_threads();

/// Runs body(i) for i in [0, n) on up to `threads` workers. Each index runs
/// exactly once; callers write results into per-index slots so the outcome
/// does not depend on scheduling. The first exception is rethrown.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& body);

}  // namespace ugk
