#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace pmibias {

/// Number of worker threads to use when the caller asked for 0 ("auto").
inline std::size_t resolve_threads(std::size_t requested) {
    if (requested > 0) {
        return requested;
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Splits [0, n) into at most `threads` contiguous chunks and calls
/// fn(chunk_index, begin, end) for each, one thread per chunk. The first
/// exception thrown by a worker is rethrown after all workers have joined.
template <class Fn>
void parallel_for_chunks(std::size_t n, std::size_t threads, Fn&& fn) {
    threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
    if (threads == 1) {
        fn(std::size_t{0}, std::size_t{0}, n);
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> workers;
        workers.reserve(threads);
        const std::size_t step = n / threads;
        const std::size_t extra = n % threads;
        std::size_t begin = 0;
        for (std::size_t t = 0; t < threads; ++t) {
            const std::size_t end = begin + step + (t < extra ? 1 : 0);
            workers.emplace_back([&, t, begin, end] {
                try {
                    fn(t, begin, end);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
            begin = end;
        }
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

}  // namespace pmibias
