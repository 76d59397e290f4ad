#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace blockcast {

inline int default_workers() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Static partition of [begin, end) into `workers` contiguous chunks.
// fn(chunk_index, lo, hi) runs on its own thread; chunk boundaries are a pure
// function of (begin, end, workers), so per-chunk results can be merged in
// chunk order for deterministic output.
template <typename Fn>
void parallel_chunks(std::int64_t begin, std::int64_t end, int workers, Fn&& fn) {
  const std::int64_t total = end - begin;
  if (total <= 0) return;
  if (workers < 1) workers = 1;
  const auto nchunks = static_cast<std::int64_t>(workers) < total
                           ? static_cast<std::int64_t>(workers)
                           : total;
  if (nchunks == 1) {
    fn(0, begin, end);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nchunks));
  for (std::int64_t c = 0; c < nchunks; ++c) {
    const std::int64_t lo = begin + total * c / nchunks;
    const std::int64_t hi = begin + total * (c + 1) / nchunks;
    pool.emplace_back([c, lo, hi, &fn] { fn(c, lo, hi); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace blockcast
