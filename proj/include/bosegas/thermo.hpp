#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace bosegas {

// Thermodynamic inputs: density rho, scattering length a, temperature T
// (units 1/length^2). Everything downstream depends only on the
// dimensionless pair (Y, T a^2) up to rescaling.
struct ThermoParams {
    double rho = 0.0;
    double a = 0.0;
    double T = 0.0;

    double Y() const { return rho * a * a * a; }
    double Ta2() const { return T * a * a; }
};

struct ConstraintCheck {
    std::string name;
    bool satisfied;
    double value;
};

// Parameter schedule of the box decomposition: kappa = 1/1000, nu = kappa/5,
// ell = a Y^{-1/2-kappa}, lambda = Y^{10 kappa}, delta = Y^{3 kappa},
// M = n^{1-68 kappa}, M0 = n^{1-80 kappa}, mu = 8 pi a rho,
// n0 = floor(20 rho ell^3).
struct ParameterSchedule {
    double kappa = 1e-3;
    double nu = 2e-4;
    double ell = 0.0;
    double lambda = 0.0;
    double delta = 0.0;
    double n_box = 0.0;  // rho * ell^3
    double M = 0.0;
    double M0 = 0.0;
    double mu = 0.0;
    int64_t n0 = 0;
    std::vector<ConstraintCheck> constraints;

    bool all_satisfied() const {
        for (const auto& c : constraints)
            if (!c.satisfied) return false;
        return true;
    }
};

ParameterSchedule schedule(const ThermoParams& tp, double potential_range);

struct LhyFreeEnergy {
    double leading = 0.0;         // 4 pi a rho^2
    double lhy_correction = 0.0;  // leading * (128/(15 sqrt(pi))) sqrt(Y)
    double thermal = 0.0;         // T^{5/2}/(2 pi)^3 * integral, <= 0
    double total = 0.0;
};

// Thermodynamic-limit free energy density of the lower bound formula.
LhyFreeEnergy lhy_free_energy(const ThermoParams& tp);

// |total(T=0) - ground-state LHY density|; zero by construction, kept as an
// executable consistency statement.
double consistency_zero_T(const ThermoParams& tp);

struct BoxAssemblyResult {
    double bound = 0.0;      // lower-bound free energy density
    double min_value = 0.0;  // min_n (F(n) - mu n)
    int64_t minimizer = 0;
    double gaussian_weight = 0.0;  // partition share of n <= n0
    double linear_weight = 0.0;    // partition share of n > n0
    int64_t n_terms = 0;
};

// -(T/ell^3) log sum_n exp(-(F(n) - mu n)/T) + mu rho over integer n in
// [0, n_cap]; the T = 0 branch minimizes instead. F comes from f_provider.
BoxAssemblyResult box_assembly(const ThermoParams& tp, const ParameterSchedule& sched,
                               const std::function<double(int64_t)>& f_provider,
                               int64_t n_cap = 0);

}  // namespace bosegas
