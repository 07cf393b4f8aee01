#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace staticize {

// Worker count from STATICIZE_THREADS (default 1). Results never depend on it:
// every task writes its own output slot.
inline int thread_count() {
    if (const char* env = std::getenv("STATICIZE_THREADS")) {
        try {
            return std::max(1, std::stoi(env));
        } catch (...) {
        }
    }
    return 1;
}

template <class F>
void parallel_for(size_t n, F&& body, int threads = thread_count()) {
    if (threads <= 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    const int k = static_cast<int>(std::min<size_t>(static_cast<size_t>(threads), n));
    for (int w = 0; w < k; ++w)
        pool.emplace_back([&] {
            for (size_t i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(err_mu);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace staticize
