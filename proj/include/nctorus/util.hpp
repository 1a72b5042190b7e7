#pragma once

/// Small shared utilities: deterministic parallel loops and index helpers.

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace nct {

/// Run fn(i) for i in [0, n) across hardware threads.  Results must be
/// written to per-index slots by the caller so the outcome is independent of
/// scheduling.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const unsigned hw = std::thread::hardware_concurrency();
  const unsigned workers = hw == 0 ? 4u : hw;
  if (n < 2 * workers) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace nct
