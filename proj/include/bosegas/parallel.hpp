#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace bosegas {

// Worker count: BOSEGAS_THREADS if set, otherwise hardware concurrency.
int thread_count();

// Runs body(i) for i in [0, n) across threads. Blocks until done.
void parallel_for(int64_t n, const std::function<void(int64_t)>& body);

// Block-wise parallel reduction. Each block [lo, hi) is reduced by
// block_sum; block results are then accumulated in block-index order, so
// the result does not depend on the number of threads.
double parallel_reduce(int64_t n, int64_t block,
                       const std::function<double(int64_t, int64_t)>& block_sum);

// Compensated (Kahan) accumulator for long sums.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

}  // namespace bosegas
