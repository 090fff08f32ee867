#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace holonomy {

// Worker cap: explicit argument, else HOLONOMY_THREADS, else 1.
inline int default_threads() {
  if (const char* env = std::getenv("HOLONOMY_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

// Runs body(i) for i in [0, n). Work is chunked over at most `threads`
// workers; callers collect per-index results into pre-sized storage and
// reduce in index order, so the outcome is identical for any thread count.
template <class Body>
void parallel_for(int n, int threads, Body&& body) {
  if (n <= 0) return;
  if (threads <= 1 || n == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  int workers = std::min(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([=, &body]() {
      for (int i = w; i < n; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace holonomy
