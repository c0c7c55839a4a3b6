#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace bosegas {

// Multiplicity table for the Neumann mode lattice pi*N0^3 \ {0}.
// count(s) = #{m in N0^3, m != 0, |m|^2 = s}, so radial sums over modes with
// |m|^2 <= s_max collapse to one pass over the table.
class RadialLattice {
  public:
    // Table covering |m|^2 <= s_max (grown on demand, never shrunk).
    static const RadialLattice& shared(int64_t s_max);

    explicit RadialLattice(int64_t s_max);

    int64_t s_max() const { return s_max_; }
    uint32_t count(int64_t s) const { return counts_[s]; }

    // sum over lattice modes m != 0 with |m|^2 <= s_limit of f(|p|) where
    // p = pi*|m|. Terms are accumulated in ascending |m|^2 with compensation.
    double sum_radial(const std::function<double(double)>& f, int64_t s_limit) const;

  private:
    int64_t s_max_;
    std::vector<uint32_t> counts_;
};

}  // namespace bosegas
