#include "parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace litho {

namespace {
std::atomic<int> g_threads{0};
}

void set_thread_count(int n) { g_threads = std::max(0, n); }

int thread_count() {
  const int n = g_threads.load();
  if (n > 0) return n;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t, int)>& body) {
  const int t = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(thread_count()), std::max<std::size_t>(n, 1)));
  if (t <= 1) {
    body(0, n, 0);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(t));
  for (int c = 0; c < t; ++c) {
    const std::size_t b = n * static_cast<std::size_t>(c) / static_cast<std::size_t>(t);
    const std::size_t e = n * static_cast<std::size_t>(c + 1) / static_cast<std::size_t>(t);
    pool.emplace_back([&, b, e, c] {
      try {
        body(b, e, c);
      } catch (...) {
        errors[static_cast<std::size_t>(c)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace litho
