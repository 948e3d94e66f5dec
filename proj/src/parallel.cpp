#include "krontrace/parallel.hpp"

#include <cstdlib>
#include <thread>

namespace kt {

namespace {
int g_threads = -1;  // -1: not yet resolved

int resolve_default() {
  if (const char* env = std::getenv("KRON_TRACE_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? (int)hw : 1;
#endif
}
}  // namespace

int thread_count() {
  if (g_threads < 0) g_threads = resolve_default();
  return g_threads;
}

void set_thread_count(int n) { g_threads = (n >= 1) ? n : resolve_default(); }

}  // namespace kt
