#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace grushin::detail {

inline int resolve_jobs(int jobs) {
    if (jobs > 0) return jobs;
    if (const char* env = std::getenv("GRUSHIN_LAB_JOBS")) {
        const int j = std::atoi(env);
        if (j > 0) return j;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

// Runs fn(chunk_index) for chunk_index in [0, n_chunks). Chunks are handed
// out dynamically but results must be stored per chunk by the caller, so the
// outcome is independent of the number of workers.
template <typename Fn>
void parallel_chunks(long n_chunks, int jobs, Fn&& fn) {
    jobs = resolve_jobs(jobs);
    if (jobs <= 1 || n_chunks <= 1) {
        for (long c = 0; c < n_chunks; ++c) fn(c);
        return;
    }
    std::atomic<long> next{0};
    auto worker = [&] {
        for (;;) {
            const long c = next.fetch_add(1);
            if (c >= n_chunks) return;
            fn(c);
        }
    };
    std::vector<std::thread> pool;
    const int nw = static_cast<int>(std::min<long>(jobs, n_chunks));
    pool.reserve(static_cast<std::size_t>(nw));
    for (int i = 0; i < nw; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

}  // namespace grushin::detail
