#include "solitonlab/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace soliton {

int thread_cap() {
  const char* env = std::getenv("SOLITON_LAB_THREADS");
  long cap = 0;
  if (env != nullptr) cap = std::strtol(env, nullptr, 10);
  if (cap <= 0) cap = static_cast<long>(std::thread::hardware_concurrency());
  if (cap < 1) cap = 1;
  return static_cast<int>(cap);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const int threads = thread_cap();
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      body(i);
    }
  };
  std::vector<std::thread> pool;
  const int use = static_cast<int>(std::min<std::size_t>(threads, n));
  pool.reserve(use);
  for (int t = 0; t < use; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace soliton
