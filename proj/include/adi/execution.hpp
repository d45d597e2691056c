#pragma once

#include <cstddef>
#include <exception>
#include <limits>

namespace adi {

/// Selects the serial reference loop or the OpenMP kernel. Both run the same
/// per-index body, so results are identical; the serial path is what tests and
/// benchmarks compare against.
enum class Execution { serial, parallel };

/// Runs body(i) for i in [0, count). Exceptions thrown inside the parallel
/// region are captured and the one from the lowest index is rethrown, so the
/// reported error does not depend on thread scheduling.
template <typename Body>
void for_each_index(Execution exec, std::size_t count, Body&& body) {
    if (exec == Execution::serial || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::exception_ptr failure;
    std::size_t failed_at = std::numeric_limits<std::size_t>::max();
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(adi_for_each_index_failure)
            {
                if (static_cast<std::size_t>(i) < failed_at) {
                    failed_at = static_cast<std::size_t>(i);
                    failure = std::current_exception();
                }
            }
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace adi
