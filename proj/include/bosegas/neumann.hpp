#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace bosegas {

using Vec3 = std::array<double, 3>;
using Int3 = std::array<int, 3>;

// Neumann eigenmode of the unit box [-1/2, 1/2]^3: index triple m >= 0,
// wavenumber p = pi*m, eigenfunction u_p a product of 1 (m_i = 0) or
// sqrt(2) cos(m_i pi (x_i + 1/2)) factors.
struct NeumannMode {
    Int3 m{0, 0, 0};

    Vec3 p() const { return {M_PI * m[0], M_PI * m[1], M_PI * m[2]}; }
    double p_norm_sq() const {
        return M_PI * M_PI * double(m[0] * m[0] + m[1] * m[1] + m[2] * m[2]);
    }
    double energy() const { return p_norm_sq(); }
    bool is_zero() const { return m[0] == 0 && m[1] == 0 && m[2] == 0; }
};

// One cosine factor: 1 for m = 0, sqrt(2) cos(m pi (x + 1/2)) otherwise.
// The formula is reflection-periodic: it takes the same value at every
// mirror image of x, which is what makes the mirror-sum kernels diagonal.
double mode_factor(int m, double x);

double mode_function(const NeumannMode& mode, const Vec3& x);

// Mirror map onto the neighbor box labeled z: (P_z(x))_i = (-1)^{z_i} x_i + z_i.
Vec3 mirror_point(const Int3& z, const Vec3& x);

// All modes with |m|_inf <= cutoff in lexicographic order.
class ModeLattice {
  public:
    ModeLattice(int cutoff, bool include_zero);

    int cutoff() const { return cutoff_; }
    const std::vector<NeumannMode>& modes() const { return modes_; }
    size_t size() const { return modes_.size(); }
    const NeumannMode& operator[](size_t i) const { return modes_[i]; }

  private:
    int cutoff_;
    std::vector<NeumannMode> modes_;
};

// The 27 neighbor labels z in {-1,0,1}^3, z = (0,0,0) first, in a fixed order.
const std::array<Int3, 27>& neighbor_labels();

}  // namespace bosegas
