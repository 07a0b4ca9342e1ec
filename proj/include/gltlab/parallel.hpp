#pragma once

#include <cstdlib>
#include <thread>
#include <vector>

namespace gltlab {

// Worker cap: GLT_LAB_THREADS when set, hardware concurrency otherwise.
inline int max_threads() {
  if (const char* env = std::getenv("GLT_LAB_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? int(hw) : 1;
}

// Runs fn(i) for i in [0, count). Chunks are contiguous and writes must go to
// disjoint slots, which keeps results identical to the sequential order.
template <class Fn>
void parallel_for(long count, Fn&& fn) {
  const int workers = std::min<long>(max_threads(), count);
  if (workers <= 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  const long chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const long lo = w * chunk, hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (long i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace gltlab
