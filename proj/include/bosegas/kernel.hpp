#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "bosegas/modified_scattering.hpp"
#include "bosegas/neumann.hpp"

namespace bosegas {

// Mirror-symmetrized kernels on the unit box:
//   Kt(x,y) = -n sum_z omega_ll_lam(P_z(x) - y)   (Neumann-compatible)
//   K(x,y)  = Kt(x,y) + n*omega_hat(0)            (zero mode projected out)
// Only labels z in {-1,0,1}^3 contribute because lambda < 1/4.
class SymmetrizedKernel {
  public:
    SymmetrizedKernel(double n, std::shared_ptr<const ModifiedScattering> ms);

    double n() const { return n_; }
    const ModifiedScattering& ms() const { return *ms_; }

    double tilde_value(const Vec3& x, const Vec3& y) const;
    double value(const Vec3& x, const Vec3& y) const;
    double k2() const { return k2_; }  // n * omega_hat(0)

    // Mode coefficient of K: -n * omega_hat(|p|) for p != 0, and 0 for p = 0.
    double mode_coefficient(const NeumannMode& p) const;

  private:
    double n_;
    std::shared_ptr<const ModifiedScattering> ms_;
    double k2_;
};

// Quadrature resolution for <u_p, T u_q> style integrals. The outer variable
// uses a tensor Gauss rule with panels tied to the boundary layer of width
// `support`; the inner y-integral runs in the difference variable over the
// support ball clipped by the box, in spherical coordinates with radial
// panels on every kink shell and analytic cap/arc clipping. Inner results
// are memoized per distinct clipped box; boxes clipped in all three
// dimensions (corner regions) are integrated directly at `corner_order`.
struct BoxQuadrature {
    int outer_order = 6;        // interior outer panels
    int outer_layer_order = 4;  // outer panels inside the boundary layer
    int outer_interior_panels = 3;
    int outer_layer_panels = 2;
    int radial_order = 12;  // ball and single-plane pieces
    int angular_order = 12;
    int edge_order = 10;   // two-plane wedge pieces (radial and angular)
    int corner_order = 7;  // three-plane slivers, direct evaluation

    BoxQuadrature refined() const {
        BoxQuadrature fine = *this;
        fine.outer_order += 1;
        fine.outer_layer_order += 1;
        fine.radial_order += 2;
        fine.angular_order += 2;
        fine.edge_order += 2;
        fine.corner_order += 1;
        return fine;
    }
};

// <u_p, T_f u_q> where T_f has kernel sum_z f(|P_z(x) - y|), f radial with
// the given support radius. Expected to equal delta_pq * f_hat(p).
double neumann_coefficient(const std::function<double(double)>& f, double support,
                           const NeumannMode& p, const NeumannMode& q,
                           const BoxQuadrature& quad = {});

struct ModeMatrixResult {
    std::vector<NeumannMode> modes;
    std::vector<double> matrix;    // row-major, size * size
    std::vector<double> expected;  // diagonal prediction from the radial FT
    double max_offdiag = 0.0;
    double max_diag_rel_err = 0.0;
    double stability = 0.0;  // change under one refinement, max-norm

    size_t size() const { return modes.size(); }
    double at(size_t i, size_t j) const { return matrix[i * modes.size() + j]; }
};

// Full matrix M_pq = <u_p, K u_q> over the lattice by 2x3-d tensor
// quadrature, with one refinement pass to report stability.
ModeMatrixResult kernel_mode_matrix(const SymmetrizedKernel& kernel,
                                    const ModeLattice& lattice,
                                    const BoxQuadrature& quad = {},
                                    bool refine_check = true);

// Boundary function h(x) = int_L V_ell(x-y) (n + K(x,y)) dy - 8 pi a n / ell.
double boundary_function(const SymmetrizedKernel& kernel, const RadialPotential& V,
                         const Vec3& x);

struct BoundaryNorms {
    double l1 = 0.0;
    double linf = 0.0;
    double center_value = 0.0;
};

BoundaryNorms boundary_h_norms(const SymmetrizedKernel& kernel,
                               const RadialPotential& V, int grid_order = 6,
                               int interior_panels = 3);

namespace detail {

// int over (c - Lambda) cap B_S of f(|t|) g(t) dt, the inner building block
// of the mode-matrix assembly; exposed for verification against brute force.
double clipped_ball_integral(const Vec3& c, double support,
                             const std::function<double(double)>& f,
                             std::span<const double> radial_breaks, int radial_order,
                             int angular_order,
                             const std::function<double(const Vec3&)>& g);

}  // namespace detail

}  // namespace bosegas
