#pragma once

#include <cstddef>

namespace ironq::par {

// Effective worker count: OpenMP's default capped by the IRONQ_THREADS
// environment variable (values < 1 mean "serial"). Always 1 in builds
// without OpenMP.
int max_threads();

// True when the parallel path is compiled in and more than one thread is
// available.
bool enabled();

namespace detail {
void run_indexed(std::size_t n, void* ctx, void (*body)(void*, std::size_t));
}

// Data-parallel loop over [0, n). The body must be safe to run concurrently
// for distinct indices; iteration order is unspecified. Callers that need
// deterministic aggregation write into index-addressed slots and reduce
// serially afterwards.
template <class F>
void parallel_for(std::size_t n, F&& body) {
  detail::run_indexed(n, &body, [](void* ctx, std::size_t i) {
    (*static_cast<F*>(ctx))(i);
  });
}

}  // namespace ironq::par
