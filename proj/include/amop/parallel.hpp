#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace amop {

inline int thread_budget() {
    if (const char* env = std::getenv("AMOP_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(std::min(hw, 4u));
}

// index-deterministic parallel map: results are produced per index and any
// reduction happens on the caller side in index order
inline void parallel_for(int count, const std::function<void(int)>& body) {
    int threads = std::min(thread_budget(), count);
    if (threads <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&]() {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= count) return;
                body(i);
            }
        });
    for (auto& th : pool) th.join();
}

} // namespace amop
