#pragma once

#include <cstdint>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lyaplab {

/// Run f(i) for i in [0, n).  The parallel path uses OpenMP when available;
/// results must be written to disjoint slots so that serial and parallel
/// execution produce identical output.  Exceptions thrown by workers are
/// captured and rethrown on the calling thread.
template <class F>
void for_each_index(std::int64_t n, bool parallel, F&& f) {
#ifdef _OPENMP
    if (parallel) {
        std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < n; ++i) {
            try {
                f(i);
            } catch (...) {
#pragma omp critical
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
        return;
    }
#else
    (void)parallel;
#endif
    for (std::int64_t i = 0; i < n; ++i) f(i);
}

inline int worker_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace lyaplab
