// Copyright The frag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace frag {

namespace detail {
inline std::atomic<unsigned>& thread_cap()
{
    static std::atomic<unsigned> cap{0};
    return cap;
}
} // namespace detail

/// Upper bound on worker threads used by parallel_for. 0 means
/// "hardware concurrency".
inline void set_max_threads(unsigned n) noexcept { detail::thread_cap() = n; }

inline unsigned max_threads() noexcept
{
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    unsigned cap = detail::thread_cap();
    return cap == 0 ? hw : std::min(cap, hw);
}

/// Reads FRAG_THREADS (a positive integer) into the thread cap. Unset or
/// malformed values leave the cap untouched.
inline void threads_from_env()
{
    if (const char* env = std::getenv("FRAG_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            set_max_threads(static_cast<unsigned>(v));
    }
}

/// Calls fn(i) for i in [0, n). Iterations must be independent; each index is
/// handled by exactly one thread so per-index results are deterministic.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn)
{
    const std::size_t workers = std::min<std::size_t>(max_threads(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        try {
            for (std::size_t i = next++; i < n; i = next++)
                fn(i);
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error)
                error = std::current_exception();
            next = n;
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w)
        pool.emplace_back(body);
    body();
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace frag
