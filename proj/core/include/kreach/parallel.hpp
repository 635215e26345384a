#pragma once

#include <functional>
#include <thread>
#include <vector>

#include "kreach/types.hpp"

namespace kreach {

// Index-based parallel map with a static contiguous partition. Work items
// must be independent; each writes only its own output slot, so results are
// identical to a serial run regardless of thread count.
inline void parallel_for(Index count, const std::function<void(Index)>& fn) {
  if (count <= 0) return;
  const Index hw = static_cast<Index>(std::thread::hardware_concurrency());
  const Index n_threads = std::max<Index>(1, std::min<Index>(hw, count));
  if (n_threads == 1) {
    for (Index i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(n_threads));
  const Index chunk = (count + n_threads - 1) / n_threads;
  for (Index t = 0; t < n_threads; ++t) {
    const Index begin = t * chunk;
    const Index end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([begin, end, &fn] {
      for (Index i = begin; i < end; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

} // namespace kreach
