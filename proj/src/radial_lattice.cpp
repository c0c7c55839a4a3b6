#include "bosegas/radial_lattice.hpp"

#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "bosegas/parallel.hpp"

namespace bosegas {

RadialLattice::RadialLattice(int64_t s_max) : s_max_(s_max) {
    if (s_max < 1) throw std::invalid_argument("RadialLattice: s_max must be >= 1");
    counts_.assign(s_max + 1, 0);
    const int64_t m_max = static_cast<int64_t>(std::sqrt(static_cast<double>(s_max)));
    // Histogram over the octant ball, parallel over m1 with per-thread rows.
    std::vector<std::vector<uint32_t>> rows(m_max + 1);
    parallel_for(m_max + 1, [&](int64_t i) {
        std::vector<uint32_t> local(s_max_ + 1, 0);
        const int64_t i2 = i * i;
        for (int64_t j = 0; i2 + j * j <= s_max_; ++j) {
            const int64_t ij = i2 + j * j;
            for (int64_t k = 0; ij + k * k <= s_max_; ++k) local[ij + k * k]++;
        }
        rows[i] = std::move(local);
    });
    for (const auto& row : rows)
        for (int64_t s = 0; s <= s_max_; ++s) counts_[s] += row[s];
    counts_[0] = 0;  // the zero mode is excluded
}

double RadialLattice::sum_radial(const std::function<double(double)>& f,
                                 int64_t s_limit) const {
    if (s_limit > s_max_)
        throw std::invalid_argument("RadialLattice::sum_radial: s_limit beyond table");
    KahanSum acc;
    for (int64_t s = 1; s <= s_limit; ++s) {
        if (counts_[s] == 0) continue;
        acc.add(counts_[s] * f(M_PI * std::sqrt(static_cast<double>(s))));
    }
    return acc.value();
}

const RadialLattice& RadialLattice::shared(int64_t s_max) {
    static std::mutex mutex;
    static std::vector<std::unique_ptr<RadialLattice>> built;
    std::lock_guard<std::mutex> lock(mutex);
    for (const auto& table : built)
        if (table->s_max() >= s_max) return *table;
    built.push_back(std::make_unique<RadialLattice>(std::max<int64_t>(2 * s_max, 4096)));
    return *built.back();
}

}  // namespace bosegas
