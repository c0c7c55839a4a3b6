#include "bosegas/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bosegas/bogoliubov.hpp"
#include "bosegas/parallel.hpp"

namespace bosegas {

ParameterSchedule schedule(const ThermoParams& tp, double potential_range) {
    if (tp.Y() <= 0.0) throw std::invalid_argument("schedule: Y must be > 0");
    ParameterSchedule s;
    const double Y = tp.Y();
    s.kappa = 1.0 / 1000.0;
    s.nu = s.kappa / 5.0;
    s.ell = tp.a * std::pow(Y, -0.5 - s.kappa);
    s.lambda = std::pow(Y, 10.0 * s.kappa);
    s.delta = std::pow(Y, 3.0 * s.kappa);
    s.n_box = tp.rho * s.ell * s.ell * s.ell;
    s.M = std::pow(s.n_box, 1.0 - 68.0 * s.kappa);
    s.M0 = std::pow(s.n_box, 1.0 - 80.0 * s.kappa);
    s.mu = 8.0 * M_PI * tp.a * tp.rho;
    s.n0 = static_cast<int64_t>(std::floor(20.0 * s.n_box));

    const double ratio = 2.0 * potential_range / s.ell;
    s.constraints.push_back({"2R/ell < lambda", ratio < s.lambda, ratio});
    s.constraints.push_back({"lambda < 1/4", s.lambda < 0.25, s.lambda});
    const double load = s.lambda * std::pow(20.0 * s.n_box / s.ell, 2.0);
    s.constraints.push_back({"lambda (n0/ell)^2 <= 1", load <= 1.0, load});
    const double t_cap = tp.rho * tp.a * std::pow(Y, -s.nu);
    s.constraints.push_back({"T <= rho a Y^-nu", tp.T <= t_cap, tp.T / t_cap});
    return s;
}

LhyFreeEnergy lhy_free_energy(const ThermoParams& tp) {
    if (tp.T < 0.0) throw std::invalid_argument("lhy_free_energy: T must be >= 0");
    LhyFreeEnergy out;
    out.leading = 4.0 * M_PI * tp.a * tp.rho * tp.rho;
    out.lhy_correction = out.leading * lhy_coefficient() * std::sqrt(tp.Y());
    if (tp.T > 0.0) {
        const double q = 16.0 * M_PI * tp.rho * tp.a / tp.T;
        out.thermal = std::pow(tp.T, 2.5) * riemann_integral_side(q);
    }
    out.total = out.leading + out.lhy_correction + out.thermal;
    return out;
}

double consistency_zero_T(const ThermoParams& tp) {
    ThermoParams zero = tp;
    zero.T = 0.0;
    LhyFreeEnergy f = lhy_free_energy(zero);
    const double ground =
        4.0 * M_PI * tp.a * tp.rho * tp.rho * (1.0 + lhy_coefficient() * std::sqrt(tp.Y()));
    return std::abs(f.total - ground);
}

BoxAssemblyResult box_assembly(const ThermoParams& tp, const ParameterSchedule& sched,
                               const std::function<double(int64_t)>& f_provider,
                               int64_t n_cap) {
    const double ell3 = sched.ell * sched.ell * sched.ell;
    if (n_cap <= 0)
        n_cap = static_cast<int64_t>(std::ceil(40.0 * tp.rho * ell3));
    n_cap = std::min<int64_t>(n_cap, 1000000);
    if (n_cap < 1) throw std::invalid_argument("box_assembly: empty n range");

    std::vector<double> shifted(n_cap + 1);
    parallel_for(n_cap + 1,
                 [&](int64_t n) { shifted[n] = f_provider(n) - sched.mu * n; });

    BoxAssemblyResult out;
    out.n_terms = n_cap + 1;
    auto it = std::min_element(shifted.begin(), shifted.end());
    out.min_value = *it;
    out.minimizer = it - shifted.begin();

    if (tp.T == 0.0) {
        out.bound = out.min_value / ell3 + sched.mu * tp.rho;
        out.gaussian_weight = out.minimizer <= sched.n0 ? 1.0 : 0.0;
        out.linear_weight = 1.0 - out.gaussian_weight;
        return out;
    }

    KahanSum z_le, z_gt;
    for (int64_t n = 0; n <= n_cap; ++n) {
        const double w = std::exp(-(shifted[n] - out.min_value) / tp.T);
        if (n <= sched.n0)
            z_le.add(w);
        else
            z_gt.add(w);
    }
    const double z = z_le.value() + z_gt.value();
    out.gaussian_weight = z_le.value() / z;
    out.linear_weight = z_gt.value() / z;
    out.bound = out.min_value / ell3 - tp.T / ell3 * std::log(z) + sched.mu * tp.rho;
    return out;
}

}  // namespace bosegas
