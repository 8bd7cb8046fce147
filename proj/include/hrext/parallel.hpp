#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace hrext {

// Runs body(begin, end, worker) over `workers` contiguous chunks of [0, total).
template <class Body>
void parallel_chunks(std::int64_t total, int workers, Body&& body) {
  workers = std::max(1, static_cast<int>(std::min<std::int64_t>(workers, std::max<std::int64_t>(total, 1))));
  if (workers == 1) {
    body(std::int64_t{0}, total, 0);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const std::int64_t begin = total * w / workers;
    const std::int64_t end = total * (w + 1) / workers;
    pool.emplace_back([&body, begin, end, w] { body(begin, end, w); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace hrext
