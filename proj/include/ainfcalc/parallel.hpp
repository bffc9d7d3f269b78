#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace ainf {

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. Results must be
/// written to pre-sized, index-stable storage by the callers; output
/// ordering is therefore deterministic regardless of scheduling.
inline void parallel_for(int jobs, int n, const std::function<void(int)>& fn) {
    if (n <= 0) return;
    if (jobs <= 1 || n == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    int workers = std::min(jobs, n);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            while (true) {
                int i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace ainf
