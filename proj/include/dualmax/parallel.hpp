#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace dualmax {

/// Worker count: min(hardware, explicit cap, DUALMAX_THREADS). Zero caps mean "no cap".
inline int effective_parallelism(int requested = 0) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    int workers = static_cast<int>(hw);
    if (requested > 0 && requested < workers) workers = requested;
    if (const char* env = std::getenv("DUALMAX_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0 && cap < workers) workers = cap;
    }
    return workers < 1 ? 1 : workers;
}

/// Runs fn(i) for i in [0, count) on up to `workers` threads. Results must be
/// written into caller-owned per-index slots; aggregation stays order-independent.
/// The first exception thrown by any task is rethrown after all threads join.
inline void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    workers = effective_parallelism(workers);
    if (workers == 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto body = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace dualmax
