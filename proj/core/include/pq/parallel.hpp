#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace pq {

// Worker count: PQ_THREADS overrides, hardware concurrency is the default.
inline int worker_count() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    if (const char* env = std::getenv("PQ_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) hw = cap;
    }
    return hw;
}

// Index-parallel loop over [0, count). Each index is processed exactly once
// and results must be written to per-index slots, so the outcome does not
// depend on the thread count.
inline void parallel_for(int count, const std::function<void(int)>& body) {
    const int workers = std::min(worker_count(), count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (int i = w; i < count; i += workers) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace pq
