#pragma once

#include <cstddef>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dynsolow {

// Maps fn over [0, n). parallel <= 1 runs the plain serial loop, which is the
// reference the OpenMP path is tested against; results must be stored by
// index so output is identical regardless of scheduling. fn must not throw
// (workers capture their own errors).
template <typename F>
void run_indexed(std::size_t n, int parallel, F&& fn) {
#ifdef _OPENMP
    if (parallel > 1) {
        const int threads = parallel;
#pragma omp parallel for schedule(dynamic) num_threads(threads)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            fn(static_cast<std::size_t>(i));
        }
        return;
    }
#else
    (void)parallel;
#endif
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

inline int hardware_parallelism() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace dynsolow
