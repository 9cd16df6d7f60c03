#pragma once

#include <cstddef>
#include <functional>

namespace elight {

/// Worker count: ELIGHT_THREADS if set (min 1), else hardware concurrency.
int thread_count();

/// Run fn(0..n-1) across thread_count() workers on disjoint index ranges.
/// Callers merge per-index results in index order, so outputs never depend
/// on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace elight
