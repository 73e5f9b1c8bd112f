// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace doa {

// Thread-count convention used across the library:
//   0  -> use all hardware threads
//   1  -> serial
//   k  -> exactly k threads
inline int resolve_threads(int requested) {
#ifdef _OPENMP
    if (requested <= 0)
        return omp_get_max_threads();
    return requested;
#else
    (void)requested;
    return 1;
#endif
}

// Runs body(i) for i in [0, count). Every index is independent, so the
// result is identical for any thread count.
template <class Fn>
void parallel_for(std::int64_t count, int threads, Fn&& body) {
    const int t = resolve_threads(threads);
#ifdef _OPENMP
    if (t > 1) {
#pragma omp parallel for num_threads(t) schedule(static)
        for (std::int64_t i = 0; i < count; ++i)
            body(i);
        return;
    }
#endif
    for (std::int64_t i = 0; i < count; ++i)
        body(i);
}

} // namespace doa
