#include "ot/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ot {

int resolve_thread_count() {
  const char* env = std::getenv("ORDINAL_TRANSPORT_THREADS");
  long requested = 0;
  if (env != nullptr && *env != '\0') {
    char* end = nullptr;
    requested = std::strtol(env, &end, 10);
    if (end == env || requested < 0) requested = 0;
  }
  if (requested == 0) {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }
  return static_cast<int>(requested);
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }

  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto worker = [&]() {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace ot
