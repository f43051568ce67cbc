#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace scsa {

// Runs fn(i) for i in [0, n). Work is split into contiguous blocks; each task
// writes only to its own output slot, so the result is independent of the
// thread count. The first exception thrown by any task is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn, unsigned jobs = 0) {
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
    if (n == 0) return;
    if (jobs <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    const std::size_t block = (n + jobs - 1) / jobs;
    for (unsigned t = 0; t < jobs; ++t) {
        const std::size_t lo = static_cast<std::size_t>(t) * block;
        const std::size_t hi = std::min(n, lo + block);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace scsa
