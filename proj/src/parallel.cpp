#include "hartogs/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hartogs::par {

int max_threads() {
#ifdef _OPENMP
    int n = omp_get_max_threads();
    if (const char* cap = std::getenv("BALANCED_LAB_THREADS")) {
        try {
            const int limit = std::stoi(cap);
            if (limit >= 1 && limit < n) n = limit;
        } catch (...) {
            // unparsable cap: ignore
        }
    }
    return n;
#else
    return 1;
#endif
}

namespace detail {

void run_indexed(std::size_t n, Exec exec, const std::function<void(std::size_t)>& body) {
    if (n == 0) return;

#ifdef _OPENMP
    if (exec == Exec::Parallel && n > 1) {
        std::vector<std::exception_ptr> errors(n);
        const int threads = max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            try {
                body(static_cast<std::size_t>(i));
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
        for (std::size_t i = 0; i < n; ++i)
            if (errors[i]) std::rethrow_exception(errors[i]);
        return;
    }
#else
    (void)exec;
#endif

    for (std::size_t i = 0; i < n; ++i) body(i);
}

} // namespace detail
} // namespace hartogs::par
