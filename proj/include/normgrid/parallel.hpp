#pragma once

#include <thread>
#include <vector>

namespace normgrid {

/// Run fn(i) for i in [0, n) on up to `threads` workers over contiguous
/// chunks. Items must be independent; callers that reduce should write into
/// per-index slots and fold sequentially afterwards, which keeps every result
/// identical for every thread count.
template <class Fn>
void parallel_for(long n, int threads, Fn&& fn) {
  if (n <= 0) return;
  if (threads < 2 || n < 4) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  int workers = threads < static_cast<int>(n) ? threads : static_cast<int>(n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  long chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    long lo = w * chunk;
    long hi = lo + chunk < n ? lo + chunk : n;
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (long i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace normgrid
