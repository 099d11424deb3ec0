#include "fracvar/threading.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace fracvar {

namespace {

std::size_t resolve_default() {
    if (const char* env = std::getenv("FRACVAR_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

std::size_t& stored_count() {
    static std::size_t count = resolve_default();
    return count;
}

}  // namespace

std::size_t thread_count() { return stored_count(); }

void set_thread_count(std::size_t n) { stored_count() = n == 0 ? 1 : n; }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min(thread_count(), n);
    if (workers <= 1 || n < 4) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto run = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
}

}  // namespace fracvar
