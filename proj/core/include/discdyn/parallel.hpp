#pragma once

#include <cstddef>
#include <functional>

namespace discdyn {

/// Worker count: DISCDYN_THREADS if set and positive, otherwise the
/// hardware concurrency (at least 1).
unsigned worker_count() noexcept;

/// Calls body(i) for every i in [0, n). Each index runs exactly once; callers
/// write results into per-index slots so reductions stay deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace discdyn
