#include "vpsumm/threads.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace vpsumm {

namespace {

int resolve(int n) {
  if (n == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }
  return std::max(1, n);
}

int initial_thread_count() {
  if (const char* env = std::getenv("VPSUMM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 0) return resolve(static_cast<int>(v));
  }
  return 1;
}

std::atomic<int>& thread_count_storage() {
  static std::atomic<int> count{initial_thread_count()};
  return count;
}

}  // namespace

int thread_count() { return thread_count_storage().load(); }

void set_thread_count(int n) { thread_count_storage().store(resolve(n)); }

void parallel_ranges(long long n, const std::function<void(long long, long long)>& fn) {
  const int threads = std::min<long long>(thread_count(), n);
  if (threads <= 1 || n < 4) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  const long long chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const long long begin = t * chunk;
    const long long end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(fn, begin, end);
  }
  for (auto& worker : pool) worker.join();
}

}  // namespace vpsumm
