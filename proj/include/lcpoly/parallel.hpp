#pragma once

#include <cstddef>
#include <functional>

namespace lcpoly {

/// Worker count: `requested` if nonzero, else hardware concurrency; either
/// way capped by the LCPOLY_THREADS environment variable when it is set.
[[nodiscard]] std::size_t resolve_thread_count(std::size_t requested = 0);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Results must
/// be written to per-index slots; the first exception by index is rethrown.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body);

}  // namespace lcpoly
