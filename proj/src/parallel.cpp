#include "ironq/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ironq::par {

int max_threads() {
#ifdef _OPENMP
  int n = omp_get_max_threads();
  if (const char* env = std::getenv("IRONQ_THREADS")) {
    try {
      const int cap = std::stoi(env);
      n = std::min(n, std::max(cap, 1));
    } catch (const std::exception&) {
      // unparseable cap: keep the OpenMP default
    }
  }
  return std::max(n, 1);
#else
  return 1;
#endif
}

bool enabled() { return max_threads() > 1; }

namespace detail {

void run_indexed(std::size_t n, void* ctx, void (*body)(void*, std::size_t)) {
#ifdef _OPENMP
  const int threads = max_threads();
  if (threads > 1 && n > 1) {
#pragma omp parallel for schedule(static) num_threads(threads)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      body(ctx, static_cast<std::size_t>(i));
    }
    return;
  }
#endif
  for (std::size_t i = 0; i < n; ++i) body(ctx, i);
}

}  // namespace detail

}  // namespace ironq::par
