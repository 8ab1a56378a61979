#pragma once

#include <cstddef>
#include <functional>

namespace linforget {

/// Number of workers to use: `requested` if nonzero, otherwise the
/// LINFORGET_WORKERS environment variable, otherwise the hardware
/// concurrency (at least 1).
unsigned resolve_worker_count(unsigned requested = 0);

/// Runs body(i) for every i in [0, count) on up to `workers` threads
/// (0 = resolve_worker_count()). Each index must write only to its own
/// output slot; scheduling order is unspecified. If several bodies throw,
/// the exception from the smallest index is rethrown.
void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& body);

}  // namespace linforget
