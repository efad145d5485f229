#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace commonsys {

/// Upper bound on worker threads used by the enumeration kernels. Zero means
/// "use hardware concurrency".
void set_max_threads(unsigned n);
unsigned max_threads();

/// Splits [0, total) into contiguous chunks, runs `work(begin, end)` on each,
/// and returns the per-chunk results in chunk order. The chunk boundaries
/// depend only on `total` and `chunks`, never on scheduling.
template <typename R>
std::vector<R> chunked_map(std::uint64_t total, std::size_t chunks,
                           const std::function<R(std::uint64_t, std::uint64_t)>& work) {
  if (chunks == 0) chunks = 1;
  if (total < chunks) chunks = total == 0 ? 1 : static_cast<std::size_t>(total);
  std::vector<R> out(chunks);
  std::vector<std::uint64_t> bounds(chunks + 1);
  for (std::size_t c = 0; c <= chunks; ++c) bounds[c] = total * c / chunks;

  unsigned workers = max_threads();
  if (workers <= 1 || chunks == 1) {
    for (std::size_t c = 0; c < chunks; ++c) out[c] = work(bounds[c], bounds[c + 1]);
    return out;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers && w < chunks; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t c = w; c < chunks; c += workers) out[c] = work(bounds[c], bounds[c + 1]);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace commonsys
