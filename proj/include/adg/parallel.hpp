#pragma once

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace adg {

// threads == 0 means "use all available"; threads == 1 forces a plain
// serial loop. Kernels built on this helper must write results only to
// disjoint per-index slots so the outcome is identical for any thread
// count.
inline int resolve_threads(int threads) {
#ifdef _OPENMP
  if (threads <= 0) return omp_get_max_threads();
  return threads;
#else
  (void)threads;
  return 1;
#endif
}

template <typename F>
void parallel_for(std::int64_t n, F&& body, int threads = 0) {
  const int nt = resolve_threads(threads);
  if (nt <= 1) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nt)
  for (std::int64_t i = 0; i < n; ++i) body(i);
#else
  for (std::int64_t i = 0; i < n; ++i) body(i);
#endif
}

}  // namespace adg
