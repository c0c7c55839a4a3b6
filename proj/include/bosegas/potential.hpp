#pragma once

#include <string>
#include <utility>
#include <vector>

namespace bosegas {

// Radial, compactly supported, non-negative interaction potential.
// Barrier: V(r) = v0 for r <= R, 0 beyond. Tabulated: linear interpolation
// between strictly increasing sample radii; the last sample must vanish.
class RadialPotential {
  public:
    enum class Kind { barrier, tabulated };

    static RadialPotential barrier(double v0, double radius);
    static RadialPotential tabulated(std::vector<std::pair<double, double>> samples);

    // Two-column text file (r, V(r)); '#' comments; whitespace or commas.
    static RadialPotential from_file(const std::string& path);

    Kind kind() const { return kind_; }
    double range() const { return range_; }
    double l1_norm() const { return l1_norm_; }  // integral of V over R^3
    bool is_zero() const { return l1_norm_ == 0.0; }

    double operator()(double r) const;

    // Radii where V or V' jumps; ODE and quadrature grids align to these.
    const std::vector<double>& breakpoints() const { return breakpoints_; }

    // Construction-time diagnostics (clamped samples, monotonicity).
    const std::vector<std::string>& warnings() const { return warnings_; }

    // V_ell(x) = ell^2 V(ell x): barrier(v0*ell^2, R/ell) etc.
    RadialPotential rescaled(double ell) const;

  private:
    RadialPotential() = default;

    Kind kind_ = Kind::barrier;
    double v0_ = 0.0;
    double range_ = 0.0;
    double l1_norm_ = 0.0;
    std::vector<double> radii_;
    std::vector<double> values_;
    std::vector<double> breakpoints_;
    std::vector<std::string> warnings_;
};

}  // namespace bosegas
