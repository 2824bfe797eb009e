#pragma once

#include <cstddef>
#include <functional>

namespace hexconf {

/// Worker count from HEXCONF_THREADS, else the hardware concurrency (at least 1).
[[nodiscard]] unsigned worker_count();

/// Calls body(i) for i in [0, count) on worker_count() threads. Each index runs exactly once;
/// callers write results by index so the outcome does not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace hexconf
