#pragma once
// Static-partition parallel for. Chunk boundaries are a pure function of
// (count, nthreads), so per-thread partial results are reproducible for a
// fixed thread count.

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace cgas {

inline unsigned resolve_threads(int requested) {
  if (requested > 0) return (unsigned)requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// f(thread_index, begin, end) over disjoint chunks of [0, count)
template <class F>
void parallel_for(std::size_t count, unsigned nthreads, F&& f) {
  if (count == 0) return;
  unsigned k = (unsigned)std::min<std::size_t>(nthreads ? nthreads : 1, count);
  if (k <= 1) {
    f(0u, (std::size_t)0, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(k - 1);
  std::size_t base = count / k, rem = count % k, begin = 0;
  for (unsigned t = 0; t < k; ++t) {
    std::size_t len = base + (t < rem ? 1 : 0);
    std::size_t b = begin, e = begin + len;
    begin = e;
    if (t + 1 == k)
      f(t, b, e);
    else
      pool.emplace_back([&f, t, b, e] { f(t, b, e); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace cgas
