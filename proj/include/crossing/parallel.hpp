#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace crossing {

inline unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(chunk, begin, end) over fixed contiguous chunks of [0, n).
/// Chunk boundaries depend only on n and nchunks, never on the thread count.
template <class Body>
void parallel_chunks(std::size_t n, std::size_t nchunks, unsigned threads, Body&& body) {
    nchunks = std::max<std::size_t>(1, std::min(nchunks, std::max<std::size_t>(n, 1)));
    auto bounds = [&](std::size_t k) { return n * k / nchunks; };
    const unsigned nt = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), nchunks));
    if (nt <= 1) {
        for (std::size_t k = 0; k < nchunks; ++k) body(k, bounds(k), bounds(k + 1));
        return;
    }
    std::exception_ptr failure;
    std::mutex m;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < nt; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t k = w; k < nchunks; k += nt) {
                try {
                    body(k, bounds(k), bounds(k + 1));
                } catch (...) {
                    std::lock_guard lock(m);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace crossing
