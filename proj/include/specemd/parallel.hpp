#pragma once

#include <cstddef>
#include <exception>
#include <limits>

namespace specemd {

/// How a batch kernel distributes its independent work items.
///
/// workers == 1 runs on the calling thread; workers == 0 uses every
/// available OpenMP thread. Results never depend on the worker count: every
/// parallel loop writes disjoint output slots.
struct Execution {
  int workers = 0;

  static Execution serial() { return Execution{1}; }
  static Execution with_workers(int n) { return Execution{n}; }

  int threads() const;
  bool is_serial() const { return threads() <= 1; }
};

/// Number of threads OpenMP would use by default (1 without OpenMP).
int available_parallelism();

/// Runs body(i) for i in [0, count) over exec.threads() OpenMP threads with
/// dynamic scheduling. If any iteration throws, the exception from the lowest
/// failing index is rethrown after the loop, so errors are deterministic.
template <typename Body>
void parallel_for(Execution exec, std::size_t count, Body&& body) {
  const int threads = exec.threads();
  const auto n = static_cast<std::ptrdiff_t>(count);
  std::exception_ptr failure;
  std::ptrdiff_t failed_at = std::numeric_limits<std::ptrdiff_t>::max();
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (threads > 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(specemd_parallel_for_failure)
      if (i < failed_at) {
        failed_at = i;
        failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace specemd
