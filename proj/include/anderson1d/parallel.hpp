#pragma once

#include <cstddef>
#include <functional>

namespace anderson::par {

/// Worker-count cap used by parallel_for_ranges. A capacity hint only:
/// results never depend on it because every parallel loop in this library
/// writes to disjoint per-index slots and reduces sequentially.
void set_max_threads(int threads);
int max_threads();

/// Splits [0, count) into contiguous ranges and runs body(begin, end) on up
/// to max_threads() workers.
void parallel_for_ranges(std::size_t count,
                         const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace anderson::par
