#include "bosegas/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>

namespace bosegas {

int thread_count() {
    static int count = [] {
        if (const char* env = std::getenv("BOSEGAS_THREADS")) {
            int n = std::atoi(env);
            if (n >= 1) return n;
        }
        unsigned hw = std::thread::hardware_concurrency();
        return hw > 0 ? static_cast<int>(hw) : 1;
    }();
    return count;
}

void parallel_for(int64_t n, const std::function<void(int64_t)>& body) {
    int workers = thread_count();
    if (n <= 0) return;
    if (workers <= 1 || n == 1) {
        for (int64_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int64_t> next{0};
    auto run = [&] {
        for (;;) {
            int64_t i = next.fetch_add(1);
            if (i >= n) return;
            body(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int t = 1; t < workers; ++t) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
}

double parallel_reduce(int64_t n, int64_t block,
                       const std::function<double(int64_t, int64_t)>& block_sum) {
    if (n <= 0) return 0.0;
    if (block < 1) block = 1;
    int64_t n_blocks = (n + block - 1) / block;
    std::vector<double> partial(n_blocks, 0.0);
    parallel_for(n_blocks, [&](int64_t b) {
        int64_t lo = b * block;
        int64_t hi = std::min(n, lo + block);
        partial[b] = block_sum(lo, hi);
    });
    KahanSum acc;
    for (double v : partial) acc.add(v);
    return acc.value();
}

}  // namespace bosegas
