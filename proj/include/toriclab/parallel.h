#pragma once

#include <atomic>
#include <cstddef>
#include <functional>

namespace toriclab {

// Worker count from TORICLAB_WORKERS, else the hardware concurrency (at least 1).
int default_workers();

// Runs body(chunk, worker) for every chunk in [0, num_chunks). Chunks are claimed from
// a shared counter, so callers must make per-chunk results independent of the worker.
// Stops claiming new chunks once *stop becomes true. The first exception is rethrown.
void parallel_for_chunks(std::size_t num_chunks, int workers,
                         const std::function<void(std::size_t chunk, int worker)>& body,
                         const std::atomic<bool>* stop = nullptr);

}  // namespace toriclab
