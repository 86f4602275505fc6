// parallel.hpp — static work partitioning with deterministic combination.

#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace entverify {

// Worker count: ENTANGLE_VERIFY_THREADS caps parallelism (0 or 1 means
// sequential); unset defaults to the hardware count, capped at 8.
inline int thread_budget() {
  if (const char* env = std::getenv("ENTANGLE_VERIFY_THREADS")) {
    const int v = std::atoi(env);
    return v <= 1 ? 1 : v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp(hw, 1u, 8u));
}

// Runs fn(index) for index in [0, count). Each index is processed exactly
// once; callers store per-index partial results and combine them in index
// order, which keeps floating-point results independent of the schedule.
inline void parallel_for_index(int count, int threads,
                               const std::function<void(int)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  const int workers = std::min(threads, count);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < count; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace entverify
