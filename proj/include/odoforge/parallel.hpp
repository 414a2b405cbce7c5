#pragma once

// Deterministic fan-out: results are indexed by task, so the merge order
// never depends on the worker count.

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace odoforge {

inline void parallel_for(size_t count, int jobs,
                         const std::function<void(size_t)>& body) {
  if (jobs <= 1 || count <= 1) {
    for (size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= count) return;
      body(i);
    }
  };
  size_t n_threads = std::min<size_t>(static_cast<size_t>(jobs), count);
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace odoforge
