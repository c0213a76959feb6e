#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace trijd {

// Runs fn(chunk, begin, end) over `threads` contiguous chunks of [0, count).
// Chunk boundaries depend only on count and threads, so callers that write
// into per-chunk buffers and concatenate in chunk order get results that do
// not depend on scheduling.
template <class Fn>
void parallel_chunks(std::size_t count, unsigned threads, Fn&& fn)
{
    threads = std::max(1u, threads);
    const std::size_t chunks = std::min<std::size_t>(threads, std::max<std::size_t>(count, 1));
    if (chunks == 1) {
        fn(std::size_t{0}, std::size_t{0}, count);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(chunks);
    for (std::size_t c = 0; c < chunks; ++c) {
        const std::size_t begin = count * c / chunks;
        const std::size_t end = count * (c + 1) / chunks;
        pool.emplace_back([&, c, begin, end] {
            try {
                fn(c, begin, end);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
    }
    for (auto& t : pool)
        t.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace trijd
