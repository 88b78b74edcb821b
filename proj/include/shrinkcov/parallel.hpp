#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace shrinkcov {

/// Worker count for a request of `threads` (0 means hardware concurrency).
inline std::size_t resolve_threads(std::size_t threads, std::size_t work_items) {
    if (threads == 0)
        threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    return std::max<std::size_t>(1, std::min(threads, work_items));
}

/// Splits [0, count) into contiguous blocks, one per worker, and calls
/// `body(begin, end)` on each. Blocks never overlap, so bodies that only
/// write to their own index range need no synchronization. The first
/// exception thrown by any worker is rethrown on the caller's thread.
template <class Body>
void parallel_blocks(std::size_t count, std::size_t threads, Body&& body) {
    if (count == 0)
        return;
    const std::size_t workers = resolve_threads(threads, count);
    if (workers == 1) {
        body(std::size_t{0}, count);
        return;
    }

    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = count / workers;
    const std::size_t extra = count % workers;
    std::size_t begin = 0;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t end = begin + chunk + (w < extra ? 1 : 0);
        pool.emplace_back([&, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                std::scoped_lock lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        });
        begin = end;
    }
    pool.clear();
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace shrinkcov
