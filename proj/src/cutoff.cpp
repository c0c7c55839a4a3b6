#include "bosegas/cutoff.hpp"

#include "bosegas/gauss.hpp"

namespace bosegas {

// chi(s) = 1 - S(2s - 1) on [1/2, 1] with S the quintic smoothstep
// S(t) = 6t^5 - 15t^4 + 10t^3.

double CutoffProfile::value(double s) const {
    if (s <= 0.5) return 1.0;
    if (s >= 1.0) return 0.0;
    const double t = 2.0 * s - 1.0;
    return 1.0 - t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double CutoffProfile::d1(double s) const {
    if (s <= 0.5 || s >= 1.0) return 0.0;
    const double t = 2.0 * s - 1.0;
    const double u = t * (1.0 - t);
    return -60.0 * u * u;  // -2 * S'(t), S'(t) = 30 t^2 (1-t)^2
}

double CutoffProfile::d2(double s) const {
    if (s <= 0.5 || s >= 1.0) return 0.0;
    const double t = 2.0 * s - 1.0;
    return -240.0 * t * (2.0 * t - 1.0) * (t - 1.0);  // -4 * S''(t)
}

double CutoffProfile::moment_identity() const {
    return gauss_panel([this](double s) { return d2(s) * s; }, 0.5, 1.0, 8);
}

}  // namespace bosegas
