#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace photobio {

/// Worker count: PHOTOBIO_THREADS when set (>= 1), else the hardware count.
inline int worker_count() {
    if (const char* env = std::getenv("PHOTOBIO_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Run body(begin, end) over contiguous chunks of [0, count) on up to
/// worker_count() threads. Exceptions from workers are rethrown.
template <class Body>
void parallel_chunks(int count, Body body) {
    const int workers = std::min(worker_count(), std::max(count, 1));
    if (workers <= 1) {
        body(0, count);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    const int chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int begin = w * chunk;
        const int end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, w, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace photobio
