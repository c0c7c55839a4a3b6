#pragma once

#include <vector>

#include "bosegas/potential.hpp"

namespace bosegas {

struct GridSpec {
    double step = 0.0;        // initial step; 0 picks range/256
    double max_radius = 0.0;  // 0 picks 3*range
    double a_tol = 1e-10;     // step halving stops when |da| < a_tol
    int max_refinements = 12;
};

// Zero-energy scattering solution in reduced form g(r) = r*(1 - omega(r)),
// normalized so that g(r) = r - a outside the support of V.
class ScatteringSolution {
  public:
    ScatteringSolution(const RadialPotential& V, const GridSpec& spec = {});

    double scattering_length() const { return a_; }
    double slope_alpha() const { return slope_alpha_; }
    double residual() const { return residual_; }
    double range() const { return range_; }
    double max_radius() const { return grid_.back(); }

    // Cubic Hermite interpolation off the solver grid; g(r) = r - a beyond it.
    double g(double r) const;
    double g_prime(double r) const;
    double omega(double r) const;  // omega = 1 - g/r, = a/r outside support

    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& g_values() const { return g_; }

    // Independent quadrature route: (8*pi)^-1 * integral of V*(1-omega).
    double quadrature_scattering_length(const RadialPotential& V) const;

  private:
    double a_ = 0.0;
    double slope_alpha_ = 0.0;
    double residual_ = 0.0;
    double range_ = 0.0;
    std::vector<double> grid_;
    std::vector<double> g_;
    std::vector<double> gp_;
};

// Scattering length of V; solves the zero-energy problem on a default grid.
double scattering_length(const RadialPotential& V);

}  // namespace bosegas
