// SPDX-License-Identifier: Apache-2.0
#include "volcap/util/threading.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace volcap {

int hardware_threads() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

void parallel_chunks(std::size_t count, int threads,
                     const std::function<void(std::size_t, std::size_t, int)>& fn) {
  if (count == 0) return;
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(count)));
  if (n == 1) {
    fn(0, count, 0);
    return;
  }
  const std::size_t chunk = (count + n - 1) / n;
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (int i = 0; i < n; ++i) {
    const std::size_t b = std::min(count, static_cast<std::size_t>(i) * chunk);
    const std::size_t e = std::min(count, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e, i] { fn(b, e, i); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace volcap
