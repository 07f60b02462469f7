#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace apn {

/// Splits [0, total) into `workers` contiguous chunks and runs
/// fn(worker, begin, end) on each, one thread per chunk. The first exception
/// thrown by any chunk is rethrown after all threads have joined.
template <class Fn>
void parallel_chunks(unsigned workers, std::uint64_t total, Fn&& fn) {
  workers = std::max(1u, workers);
  if (workers == 1 || total < workers) {
    fn(0u, std::uint64_t{0}, total);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = total / workers * w + std::min<std::uint64_t>(w, total % workers);
    const std::uint64_t end = begin + total / workers + (w < total % workers ? 1 : 0);
    threads.emplace_back([&, w, begin, end] {
      try {
        fn(w, begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace apn
