#pragma once

#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

namespace entroad {

/// Worker count from ENTROAD_THREADS (0 = run on the calling thread);
/// defaults to the hardware concurrency.
inline std::size_t thread_count() {
  if (const char* env = std::getenv("ENTROAD_THREADS")) {
    try {
      return static_cast<std::size_t>(std::stoul(env));
    } catch (const std::exception&) {
      return 0;
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// results[i] = fn(i). Results land in index order whatever the schedule, so
/// output is identical to the sequential run. The first exception (by index)
/// is rethrown after all workers finish.
template <class Fn>
auto parallel_map(std::size_t n, Fn&& fn, std::size_t threads) {
  using R = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<R> results(n);
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) results[i] = fn(i);
    return results;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        results[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t k = threads < n ? threads : n;
  for (std::size_t t = 0; t < k; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

}  // namespace entroad
