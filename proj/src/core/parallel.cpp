#include "core/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace slicelab {

namespace {
std::atomic<int> g_max_threads{0};

int hardware_threads() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}
}  // namespace

void set_max_threads(int n) { g_max_threads.store(n > 0 ? n : 0); }

int max_threads() {
  const int n = g_max_threads.load();
  return n > 0 ? n : hardware_threads();
}

void parallel_chunks(std::uint64_t begin, std::uint64_t end,
                     const std::function<void(std::uint64_t, std::uint64_t)>& fn) {
  if (begin >= end) return;
  const std::uint64_t total = end - begin;
  const int workers = static_cast<int>(
      std::min<std::uint64_t>(static_cast<std::uint64_t>(max_threads()), total));
  if (workers <= 1 || total < 2) {
    fn(begin, end);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  const std::uint64_t chunk = (total + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::uint64_t b = begin + chunk * static_cast<std::uint64_t>(w);
    const std::uint64_t e = std::min(end, b + chunk);
    if (b >= e) break;
    threads.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& t : threads) t.join();
}

}  // namespace slicelab
