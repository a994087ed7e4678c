#pragma once

// Minimal fork-join helper. SPINWITNESS_THREADS caps the worker count.
// Each index writes its own output slot, so results are order-independent;
// reductions happen serially afterwards in index order.

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace spinwitness {

inline unsigned thread_cap() {
    if (const char* env = std::getenv("SPINWITNESS_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<unsigned>(v);
        } catch (...) {
        }
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? hc : 1;
}

namespace detail {
inline thread_local bool inside_parallel_region = false;
}

template <typename Fn>
void parallel_for_index(std::size_t count, Fn&& fn) {
    const unsigned nthreads =
        static_cast<unsigned>(std::min<std::size_t>(thread_cap(), count));
    if (nthreads <= 1 || detail::inside_parallel_region) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(nthreads);
    for (unsigned w = 0; w < nthreads; ++w) {
        workers.emplace_back([&, w] {
            detail::inside_parallel_region = true;
            for (std::size_t i = w; i < count; i += nthreads) fn(i);
        });
    }
    for (auto& t : workers) t.join();
}

}  // namespace spinwitness
