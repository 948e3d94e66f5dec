#pragma once

#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kt {

// Worker count: KRON_TRACE_THREADS if set, else the OpenMP default.
// Parallel loop bodies must write only to their own slot of preallocated
// storage; reductions happen serially afterwards, so results are identical
// for every thread count.
int thread_count();
void set_thread_count(int n);  // n <= 0 restores the default

template <class F>
void parallel_for(int n, F&& f) {
#ifdef _OPENMP
  if (thread_count() > 1 && n > 1) {
    // an exception may not escape the region; capture the first and
    // rethrow after the join
    std::exception_ptr err;
    std::mutex err_mx;
#pragma omp parallel for schedule(dynamic) num_threads(thread_count())
    for (int i = 0; i < n; ++i) {
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mx);
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
    return;
  }
#endif
  for (int i = 0; i < n; ++i) f(i);
}

// Reference path for the benchmark and for pinning down parallel bugs.
template <class F>
void serial_for(int n, F&& f) {
  for (int i = 0; i < n; ++i) f(i);
}

}  // namespace kt
