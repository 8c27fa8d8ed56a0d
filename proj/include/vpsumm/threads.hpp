#pragma once

#include <functional>

namespace vpsumm {

// Worker-thread count used by the per-video sweeps. Defaults to the
// VPSUMM_THREADS environment variable, else 1. 0 means "all hardware threads".
int thread_count();
void set_thread_count(int n);

// Runs fn(begin, end) over a partition of [0, n) using the configured
// thread count. Falls back to a single inline call for small n.
void parallel_ranges(long long n, const std::function<void(long long, long long)>& fn);

}  // namespace vpsumm
