#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>

namespace rgnn {

/// OpenMP loop over [0, n) that forwards the first exception thrown by `body`
/// to the caller instead of terminating. Iterations must be independent.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    std::exception_ptr error;
    std::mutex mutex;
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard lock(mutex);
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace rgnn
