#include "halnum/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace halnum {

void run_blocks(std::size_t nblocks, unsigned threads,
                const std::function<void(std::size_t)>& fn) {
  if (nblocks == 0) return;
  if (threads <= 1 || nblocks == 1) {
    for (std::size_t i = 0; i < nblocks; ++i) fn(i);
    return;
  }
  const unsigned nworkers =
      static_cast<unsigned>(std::min<std::size_t>(threads, nblocks));
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= nblocks) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(nworkers);
  for (unsigned w = 0; w < nworkers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace halnum
