#include "hopc/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace hopc {

namespace {
std::atomic<int> g_max_threads{0};

int effective_threads() {
    int cap = g_max_threads.load(std::memory_order_relaxed);
    if (cap > 0) return cap;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}
} // namespace

void set_max_threads(int n) { g_max_threads.store(n < 0 ? 0 : n); }

int max_threads() { return effective_threads(); }

void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t)>& fn) {
    const std::int64_t count = end - begin;
    if (count <= 0) return;

    const int nthreads = static_cast<int>(
        std::min<std::int64_t>(effective_threads(), count));
    if (nthreads <= 1) {
        for (std::int64_t i = begin; i < end; ++i) fn(i);
        return;
    }

    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    auto run_chunk = [&](std::int64_t lo, std::int64_t hi) {
        try {
            for (std::int64_t i = lo; i < hi && !failed.load(); ++i) fn(i);
        } catch (...) {
            if (!failed.exchange(true)) first_error = std::current_exception();
        }
    };

    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(nthreads) - 1);
    const std::int64_t chunk = (count + nthreads - 1) / nthreads;
    for (int t = 1; t < nthreads; ++t) {
        const std::int64_t lo = begin + t * chunk;
        const std::int64_t hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        workers.emplace_back(run_chunk, lo, hi);
    }
    run_chunk(begin, std::min(end, begin + chunk));
    for (auto& w : workers) w.join();

    if (first_error) std::rethrow_exception(first_error);
}

} // namespace hopc
