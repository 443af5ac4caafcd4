// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace helmix {

inline int& detail_thread_count() {
  static int n = 1;
  return n;
}

inline void set_thread_count(int n) { detail_thread_count() = n < 1 ? 1 : n; }
inline int thread_count() { return detail_thread_count(); }

// Static block partition over [0, n). Each index is processed exactly once by
// exactly one thread, so results are identical for any thread count as long
// as the body writes disjoint locations.
template <class F>
void parallel_for(std::ptrdiff_t n, F&& body) {
  const int nt = thread_count();
  if (nt <= 1 || n < 4096) {
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
    return;
  }
  const std::ptrdiff_t chunk = (n + nt - 1) / nt;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nt - 1));
  auto run = [&body](std::ptrdiff_t lo, std::ptrdiff_t hi) {
    for (std::ptrdiff_t i = lo; i < hi; ++i) body(i);
  };
  for (int t = 1; t < nt; ++t) {
    const std::ptrdiff_t lo = t * chunk;
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n, lo + chunk);
    if (lo < hi) pool.emplace_back(run, lo, hi);
  }
  run(0, std::min(chunk, n));
  for (auto& th : pool) th.join();
}

}  // namespace helmix
