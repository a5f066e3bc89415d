#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace fincorpus {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [0, count) across `threads` workers. Work is handed
// out in contiguous chunks via an atomic cursor; results must be written
// to per-index slots so output order never depends on scheduling.
inline void parallel_for(std::size_t count, int threads,
                         const std::function<void(std::size_t)>& fn) {
    const int n = std::min<int>(resolve_threads(threads),
                                static_cast<int>(std::max<std::size_t>(count, 1)));
    if (n <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> cursor{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    const std::size_t chunk = std::max<std::size_t>(1, count / (static_cast<std::size_t>(n) * 8));
    auto worker = [&]() {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t start = cursor.fetch_add(chunk);
            if (start >= count) break;
            const std::size_t end = std::min(count, start + chunk);
            try {
                for (std::size_t i = start; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true)) error = std::current_exception();
                break;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace fincorpus
