#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace qkband {

/// Worker count for parallel loops: QKBAND_WORKERS overrides, otherwise the
/// hardware concurrency (at least 1).
inline std::size_t worker_count() {
    if (const char* env = std::getenv("QKBAND_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<std::size_t>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? hc : 1;
}

namespace detail {
inline thread_local bool in_parallel_region = false;
}

/// Runs fn(i) for i in [begin, end) on a bounded pool. Tasks must write to
/// disjoint slots; the result must not depend on scheduling order. Nested
/// calls degrade to serial loops instead of oversubscribing.
inline void parallel_for(std::size_t begin, std::size_t end,
                         const std::function<void(std::size_t)>& fn) {
    const std::size_t total = end > begin ? end - begin : 0;
    if (total == 0) return;
    std::size_t workers = worker_count();
    if (workers > total) workers = total;
    if (workers <= 1 || detail::in_parallel_region) {
        for (std::size_t i = begin; i < end; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{begin};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            detail::in_parallel_region = true;
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= end || failed.load()) break;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!failed.exchange(true)) error = std::current_exception();
                    break;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failed.load() && error) std::rethrow_exception(error);
}

}  // namespace qkband
