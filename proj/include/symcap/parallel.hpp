#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace symcap {

/// Runs f(i) for i in [0, n) on up to `threads` workers.  Each index writes
/// its own output slot, so results do not depend on scheduling.  The first
/// exception (lowest index) is rethrown after all workers finish.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f)
{
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::mutex m;
    std::size_t failed_at = n;
    std::exception_ptr error;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += threads) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard lock(m);
                    if (i < failed_at) {
                        failed_at = i;
                        error = std::current_exception();
                    }
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

inline unsigned default_threads()
{
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace symcap
