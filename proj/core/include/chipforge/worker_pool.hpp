// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace chipforge {

inline std::size_t default_jobs() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 4;
}

/// Run fn(0..count-1) on up to `jobs` worker threads. Work items must be
/// independent; callers keep result ordering deterministic by writing into
/// index i of a pre-sized container, never by completion order.
template <typename Fn>
void parallel_for_indexed(std::size_t count, std::size_t jobs, Fn&& fn) {
    if (count == 0) return;
    if (jobs == 0) jobs = default_jobs();
    jobs = std::min(jobs, count);
    if (jobs <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (std::size_t w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& t : workers) t.join();
}

} // namespace chipforge
