#include "checkerboard/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace checkerboard {

int thread_cap() {
  int cap = 0;
  if (const char* env = std::getenv("CHECKERBOARD_THREADS")) {
    try {
      cap = std::stoi(env);
    } catch (...) {
      cap = 0;
    }
  }
  if (cap <= 0) cap = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(1, cap);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_parallel) {
  if (n == 0) return;
  const int cap = thread_cap();
  if (cap == 1 || n < min_parallel) {
    body(0, n);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(cap), n);
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace checkerboard
