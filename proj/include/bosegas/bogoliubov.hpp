#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "bosegas/modified_scattering.hpp"
#include "bosegas/neumann.hpp"

namespace bosegas {

// Parameters of the quadratic box Hamiltonian. Temperature is in units of
// 1/length^2 (hbar = 1, 2m = 1). Requires lambda * (n/ell)^2 <= 1 on top of
// the window 2R/ell < lambda < 1/4 already enforced by ModifiedScattering.
class BogParams {
  public:
    BogParams(std::shared_ptr<const ModifiedScattering> ms, double n, double T);

    double n() const { return n_; }
    double T() const { return T_; }
    double a() const { return ms_->a(); }
    double ell() const { return ms_->ell(); }
    double lambda() const { return ms_->lambda(); }
    double density_ratio() const { return density_ratio_; }  // n*a/ell
    const ModifiedScattering& ms() const { return *ms_; }
    std::shared_ptr<const ModifiedScattering> ms_ptr() const { return ms_; }

    // A_p = p^2 + 8 pi a n / ell,  B_p = n * eps_hat(p), for p = |p| != 0.
    double coeff_A(double p) const;
    double coeff_B(double p) const;
    double mean_field() const;  // 8 pi a n / ell
    double c2() const { return 16.0 * M_PI * a() * n() / ell(); }

    // Approximate dispersion sqrt(p^4 + 16 pi a n/ell p^2).
    double e_approx(double p) const;

  private:
    std::shared_ptr<const ModifiedScattering> ms_;
    double n_;
    double T_;
    double density_ratio_;
};

struct Rotation {
    double nu;   // <= 0
    double phi;  // asinh(nu) <= 0
    double e;    // sqrt(A^2 - B^2) > 0
};

// Bogoliubov rotation data; throws if A <= |B|.
Rotation rotation(double A, double B);

struct DispersionRow {
    NeumannMode mode;
    double p;  // |p|
    double A, B, nu, phi, e, e_approx;
};

// Per-mode table over a lattice (zero mode excluded); constructor fails on
// any degenerate mode with A <= |B|.
class DispersionTable {
  public:
    DispersionTable(const BogParams& params, const ModeLattice& lattice);
    const std::vector<DispersionRow>& rows() const { return rows_; }
    double max_deviation() const;  // sup |e - e_approx|

  private:
    std::vector<DispersionRow> rows_;
};

// sup over the given |p| grid of |e_p - e_approx(p)|.
double dispersion_deviation(const BogParams& params, std::span<const double> p_grid);

struct GroundEnergy {
    double value = 0.0;        // E_{n,ell}, unit-box units
    double lattice_sum = 0.0;  // 4 pi a n^2/ell + truncated half-sum
    double tail = 0.0;         // Euler-Maclaurin tail correction added in
    double tail_estimate = 0.0;
};

// E_{n,ell} = 4 pi a n^2/ell
//   + 1/2 sum_{p != 0} [sqrt(p^4 + c p^2) - p^2 - c/2 + (c/2)^2/(2p^2)],
// c = 16 pi a n / ell, summed over |m| <= m_cutoff with an analytic tail.
GroundEnergy ground_energy(const BogParams& params, int m_cutoff);

// Closed-form second-order coefficient 128/(15 sqrt(pi)).
double lhy_coefficient();

// Residual of the dimensionless ground-state lattice sum against the closed
// LHY form at x = n a / ell:
//   (1/2) sum_{p != 0} bracket(p; c = 16 pi x) - 4 pi (128/(15 sqrt pi)) x^{5/2}.
// Scales like x^2. Cutoff 0 picks one adapted to x.
double lhy_residual(double x, int m_cutoff = 0);

// (1/2) * int_{R^3, z >= 0} g with g(z) = sqrt(z^4+16z^2) - 8 - z^2 + 32/z^2;
// equals 512 pi / 15.
double lhy_g_half_space_integral();

struct ThermalSum {
    double value = 0.0;  // f_th <= 0
    double tail_estimate = 0.0;
    int64_t terms = 0;
};

// f_th = T sum_{p != 0} log(1 - exp(-sqrt(p^4 + c p^2)/(T ell^2))).
// Summands with exponent > 746 underflow to exact zeros and are dropped.
ThermalSum thermal_free_energy(const BogParams& params);

struct BoxFreeEnergy {
    double ground = 0.0;          // closed LHY form of the quadratic ground part
    double ground_lattice = 0.0;  // E_{n,ell} / ell^2, lattice route
    double thermal = 0.0;
    double total = 0.0;  // ground + thermal
    double lattice_tail_estimate = 0.0;
    double thermal_tail_estimate = 0.0;
};

BoxFreeEnergy f_bog(const BogParams& params, int m_cutoff = 0);

struct EBogDeviation {
    double deviation = 0.0;  // |e_bog(exact A,B) - mean-field bracket sum|
    double exact = 0.0;
    double approx = 0.0;
};

// Gap between the diagonalization constant with exact B_p = n eps_hat(p) and
// its 8 pi a n / ell replacement.
EBogDeviation e_bog_deviation(const BogParams& params, int m_cutoff);

// | hbar^3 sum_{p in pi N0^3 \ 0} g(hbar p, q) - (2 pi)^-3 * 8 * int_oct g |,
// g(p, q) = log(1 - exp(-sqrt(p^4 + q p^2))). Scales like hbar.
double riemann_gap(double hbar, double q);

// Lattice sum side and integral side of the gap, separately.
double riemann_lattice_side(double hbar, double q);
double riemann_integral_side(double q);

}  // namespace bosegas
