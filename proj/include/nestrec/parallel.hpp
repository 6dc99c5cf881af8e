#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace nestrec {

/// Resolve a requested worker count; 0 means "one per hardware thread".
inline unsigned resolve_jobs(unsigned jobs)
{
    if (jobs == 0)
        jobs = std::max(1u, std::thread::hardware_concurrency());
    return jobs;
}

/// Split [lo, hi] into at most `jobs` contiguous chunks, in increasing order,
/// and call body(chunk_lo, chunk_hi, chunk_index) for each one, concurrently
/// when jobs > 1. The first exception thrown by any worker is rethrown.
/// Returns the number of chunks used.
template <class Body>
std::size_t for_each_chunk(std::int64_t lo, std::int64_t hi, unsigned jobs, Body&& body)
{
    if (hi < lo)
        return 0;
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    const auto workers = static_cast<std::uint64_t>(std::min<std::uint64_t>(resolve_jobs(jobs), span));
    if (workers <= 1) {
        body(lo, hi, std::size_t{0});
        return 1;
    }

    const std::uint64_t step = span / workers;
    const std::uint64_t extra = span % workers;
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    std::int64_t chunk_lo = lo;
    for (std::uint64_t w = 0; w < workers; ++w) {
        const auto len = static_cast<std::int64_t>(step + (w < extra ? 1 : 0));
        const std::int64_t chunk_hi = chunk_lo + len - 1;
        threads.emplace_back([&, chunk_lo, chunk_hi, w] {
            try {
                body(chunk_lo, chunk_hi, static_cast<std::size_t>(w));
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
        chunk_lo = chunk_hi + 1;
    }
    for (auto& t : threads)
        t.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return static_cast<std::size_t>(workers);
}

}  // namespace nestrec
