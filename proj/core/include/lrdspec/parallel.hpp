#pragma once

#include <algorithm>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace lrdspec {

/// Runs body(i) for i in [0, n). Work is split into contiguous chunks, one
/// per worker; results must be written to disjoint slots so that the output
/// is identical for any thread count. The first exception thrown by a worker
/// is rethrown on the calling thread.
inline void parallel_for(long n, int threads, const std::function<void(long)>& body) {
    if (n <= 0) return;
    threads = std::max(1, threads);
    const long workers = std::min<long>(threads, n);
    if (workers == 1) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const long chunk = (n + workers - 1) / workers;
    for (long w = 0; w < workers; ++w) {
        const long lo = w * chunk;
        const long hi = std::min(n, lo + chunk);
        pool.emplace_back([&, lo, hi, w] {
            try {
                for (long i = lo; i < hi; ++i) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

inline int default_threads() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace lrdspec
