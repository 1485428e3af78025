#pragma once

#include <cstddef>
#include <functional>

namespace gaudin {

/// Global worker budget used by the sweeps below. Set once from the CLI;
/// defaults to min(hardware_concurrency, 8).
int default_threads();
void set_default_threads(int n);

/// Runs fn(0..count-1) on up to `threads` workers (<= 0 means the global
/// default). Tasks must be independent; the first exception, if any, is
/// rethrown after all workers join. Results must be written to preassigned
/// slots so the outcome is identical for every thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  int threads = 0);

}  // namespace gaudin
