#include "bosegas/neumann.hpp"

namespace bosegas {

double mode_factor(int m, double x) {
    if (m == 0) return 1.0;
    return M_SQRT2 * std::cos(m * M_PI * (x + 0.5));
}

double mode_function(const NeumannMode& mode, const Vec3& x) {
    return mode_factor(mode.m[0], x[0]) * mode_factor(mode.m[1], x[1]) *
           mode_factor(mode.m[2], x[2]);
}

Vec3 mirror_point(const Int3& z, const Vec3& x) {
    Vec3 out;
    for (int i = 0; i < 3; ++i)
        out[i] = (z[i] % 2 == 0 ? x[i] : -x[i]) + z[i];
    return out;
}

ModeLattice::ModeLattice(int cutoff, bool include_zero) : cutoff_(cutoff) {
    for (int i = 0; i <= cutoff; ++i)
        for (int j = 0; j <= cutoff; ++j)
            for (int k = 0; k <= cutoff; ++k) {
                if (!include_zero && i == 0 && j == 0 && k == 0) continue;
                modes_.push_back(NeumannMode{{i, j, k}});
            }
}

const std::array<Int3, 27>& neighbor_labels() {
    static const std::array<Int3, 27> labels = [] {
        std::array<Int3, 27> out{};
        out[0] = {0, 0, 0};
        int idx = 1;
        for (int i = -1; i <= 1; ++i)
            for (int j = -1; j <= 1; ++j)
                for (int k = -1; k <= 1; ++k) {
                    if (i == 0 && j == 0 && k == 0) continue;
                    out[idx++] = {i, j, k};
                }
        return out;
    }();
    return labels;
}

}  // namespace bosegas
