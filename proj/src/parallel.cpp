#include "anderson1d/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace anderson::par {

namespace {

std::atomic<int> g_max_threads{0};  // 0: not set yet, use hardware count

int default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}

}  // namespace

void set_max_threads(int threads) {
  g_max_threads.store(std::clamp(threads, 1, 256));
}

int max_threads() {
  const int t = g_max_threads.load();
  return t == 0 ? default_threads() : t;
}

void parallel_for_ranges(
    std::size_t count,
    const std::function<void(std::size_t, std::size_t)>& body) {
  if (count == 0) return;
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(max_threads()), count);
  if (workers <= 1) {
    body(0, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t begin = std::min(count, w * chunk);
    const std::size_t end = std::min(count, begin + chunk);
    if (begin < end) pool.emplace_back(body, begin, end);
  }
  body(0, std::min(count, chunk));
  for (std::thread& t : pool) t.join();
}

}  // namespace anderson::par
