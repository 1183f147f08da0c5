#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <utility>
#include <vector>

namespace hartogs::par {

/// Serial is the reference implementation; Parallel runs the same body under
/// OpenMP. Results are identical in either mode because every iteration
/// writes only to its own slot and reductions happen afterwards in index
/// order.
enum class Exec { Serial, Parallel };

/// Worker count for Exec::Parallel: OpenMP's max, clamped by the
/// BALANCED_LAB_THREADS environment variable. 1 when built without OpenMP.
int max_threads();

namespace detail {
void run_indexed(std::size_t n, Exec exec, const std::function<void(std::size_t)>& body);
}

/// Runs body(i) for i in [0, n). Exceptions are captured per index and the
/// lowest-index one is rethrown after the loop, matching what a serial
/// left-to-right run would surface first.
template <typename F>
void for_each_index(std::size_t n, Exec exec, F&& body) {
    std::function<void(std::size_t)> fn = std::forward<F>(body);
    detail::run_indexed(n, exec, fn);
}

} // namespace hartogs::par
