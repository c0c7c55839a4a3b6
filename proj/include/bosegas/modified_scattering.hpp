#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "bosegas/cutoff.hpp"
#include "bosegas/potential.hpp"
#include "bosegas/scattering.hpp"

namespace bosegas {

// Truncated scattering data on the unit box scale: omega_ll(x) = omega(ell x),
// omega_ll_lam = omega_ll * chi(|x|/lambda), and the renormalized potential
// eps(r) = (2a/ell) lambda^-3 chi''(r/lambda) / (r/lambda), supported on
// lambda/2 <= r <= lambda. Requires 2R/ell < lambda < 1/4.
class ModifiedScattering {
  public:
    ModifiedScattering(std::shared_ptr<const ScatteringSolution> solution,
                       double ell, double lambda);
    ModifiedScattering(const RadialPotential& V, double ell, double lambda);

    double a() const { return solution_->scattering_length(); }
    double ell() const { return ell_; }
    double lambda() const { return lambda_; }
    const CutoffProfile& profile() const { return profile_; }
    const ScatteringSolution& solution() const { return *solution_; }

    double epsilon(double r) const;
    double omega_lambda(double r) const;  // omega(ell r) * chi(r/lambda)

    // Radial Fourier transforms f_hat(p) = 4*pi int f(r) r^2 sinc(p r) dr.
    double epsilon_hat(double p) const;
    double omega_hat(double p) const;

    // Interpolated transforms backed by a lazily grown radial table.
    double epsilon_hat_cached(double p) const;
    double omega_hat_cached(double p) const;

  private:
    struct Table {
        double dp = 0.0;
        std::vector<double> values;
    };
    double cached(Table& table, double p, bool is_epsilon) const;

    std::shared_ptr<const ScatteringSolution> solution_;
    double ell_;
    double lambda_;
    double support_break_;  // R/ell, where omega switches to a/(ell r)
    CutoffProfile profile_;

    mutable std::mutex table_mutex_;
    mutable Table eps_table_;
    mutable Table omega_table_;
};

}  // namespace bosegas
