#pragma once

#include <cstddef>
#include <functional>

namespace persbar {

/// Worker count: `requested` if positive, else PERSBAR_WORKERS from the
/// environment, else the hardware concurrency.
unsigned resolve_workers(int requested);

/// Calls fn(i) for i in [0, n) on up to `workers` threads. Threads claim
/// chunks from a shared counter; fn must write only to slot i of its output,
/// which keeps every result independent of scheduling. The first exception
/// thrown by fn is rethrown after all threads stop.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn);

}  // namespace persbar
