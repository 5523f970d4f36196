#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#include <omp.h>

namespace smc {

/// Below this many iterations the kernels stay serial.
inline constexpr std::size_t kParallelThreshold = 64;

/// Runs fn(i) for i in [0, n) on the OpenMP team. The first exception thrown
/// by any iteration is rethrown on the calling thread. Iterations must only
/// write to disjoint outputs; results are then independent of the schedule.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn, std::size_t threshold = kParallelThreshold)
{
    std::exception_ptr error;
    std::once_flag once;
    const long count = static_cast<long>(n);
#pragma omp parallel for schedule(static) if (n >= threshold && !omp_in_parallel())
    for (long i = 0; i < count; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
            std::call_once(once, [&] { error = std::current_exception(); });
        }
    }
    if (error) std::rethrow_exception(error);
}

/// Caps the pool size (SMC_THREADS in the CLI).
inline void set_thread_limit(int threads)
{
    if (threads > 0) omp_set_num_threads(threads);
}

}  // namespace smc
