#pragma once

// Bounded worker pool for independent tasks indexed 0..n-1. Each task writes
// its own preassigned output slot, so results are identical for any job
// count or schedule.

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace xresp {

template <typename Fn>
inline void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
    if (n == 0) return;
    if (jobs <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    unsigned workers = std::min<std::size_t>(jobs, n);
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next.store(n);  // drain remaining work
                    return;
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace xresp
