#include "exgeo/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace exgeo {

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(long n, int workers, const std::function<void(long)>& body) {
  if (n <= 0) return;
  workers = resolve_workers(workers);
  if (workers <= 1 || n == 1) {
    for (long i = 0; i < n; ++i) body(i);
    return;
  }
  if (static_cast<long>(workers) > n) workers = static_cast<int>(n);

  std::atomic<long> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  // chunked dynamic scheduling: cheap enough for coarse items, keeps the
  // tail balanced for expensive ones
  const long chunk = std::max(1L, n / (8L * workers));

  auto run = [&] {
    for (;;) {
      const long begin = next.fetch_add(chunk);
      if (begin >= n) return;
      const long end = std::min(n, begin + chunk);
      for (long i = begin; i < end; ++i) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          failed = true;
          return;
        }
      }
      if (failed) return;
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (failed) std::rethrow_exception(error);
}

}  // namespace exgeo
