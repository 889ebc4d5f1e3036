#pragma once

// Minimal fork-join loop over independent indices.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "core.hpp"

namespace chirp {

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0 or 1 means the
/// calling thread only). Indices are handed out dynamically. The first
/// exception, in index order, is rethrown after all workers finish.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(threads, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Worker count from RICCATI_CHIRP_THREADS: unset means all hardware
/// threads, 0 means sequential.
inline unsigned thread_count_from_env() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const char* v = std::getenv("RICCATI_CHIRP_THREADS");
  if (v == nullptr || *v == '\0') return hw;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 0)
    throw config_error(std::string("RICCATI_CHIRP_THREADS must be a non-negative integer, got '") +
                       v + "'");
  return static_cast<unsigned>(std::min<long>(n, hw));
}

}  // namespace chirp
