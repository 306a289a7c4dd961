#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace warpcone {

// Thread cap: min(hardware, WARPCONE_THREADS if set).
inline unsigned thread_budget() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("WARPCONE_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && static_cast<unsigned>(cap) < n) n = static_cast<unsigned>(cap);
    }
    return n;
}

// Runs body(i) for i in [0, n); work items must be independent and results
// indexed so the outcome does not depend on scheduling.
inline void parallel_for(int n, const std::function<void(int)>& body) {
    const unsigned workers = std::min<unsigned>(thread_budget(), static_cast<unsigned>(std::max(n, 1)));
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (int i = static_cast<int>(w); i < n; i += static_cast<int>(workers)) body(i);
        });
    for (auto& th : pool) th.join();
}

} // namespace warpcone
