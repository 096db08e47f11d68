#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace crowdrep::detail {

/// Runs fn(i) for i in [0, n) over `threads` contiguous blocks. Each index is
/// handled by exactly one thread, so per-index results do not depend on the
/// thread count. The first exception thrown is rethrown after all blocks join.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    threads = std::max(1u, threads);
    if (threads == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t blocks = std::min<std::size_t>(threads, n);
    std::vector<std::exception_ptr> errors(blocks);
    std::vector<std::thread> pool;
    pool.reserve(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::size_t lo = n * b / blocks;
        const std::size_t hi = n * (b + 1) / blocks;
        pool.emplace_back([&, b, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                errors[b] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace crowdrep::detail
