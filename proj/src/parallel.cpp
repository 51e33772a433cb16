#include "elkin/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace elkin {

int thread_count() {
  if (const char* env = std::getenv("ELKIN_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) {
      return n;
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_chunks(int n, const std::function<void(int, int, int)>& fn) {
  if (n <= 0) {
    return;
  }
  const int workers = std::min(thread_count(), n);
  if (workers == 1) {
    fn(0, n, 0);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int w = 1; w < workers; ++w) {
    const int begin = static_cast<int>(static_cast<long long>(n) * w / workers);
    const int end = static_cast<int>(static_cast<long long>(n) * (w + 1) / workers);
    pool.emplace_back([&fn, begin, end, w] { fn(begin, end, w); });
  }
  fn(0, static_cast<int>(static_cast<long long>(n) / workers), 0);
  for (auto& t : pool) {
    t.join();
  }
}

}  // namespace elkin
