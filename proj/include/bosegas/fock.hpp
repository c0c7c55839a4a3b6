#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "bosegas/bogoliubov.hpp"
#include "bosegas/neumann.hpp"
#include "bosegas/potential.hpp"

namespace bosegas {

// Occupation-number basis over a finite mode set, truncated either by total
// occupation <= n_max or restricted to a fixed-particle sector.
class TruncatedFockSpace {
  public:
    static constexpr size_t kDimLimit = 5000;

    static TruncatedFockSpace max_total(std::vector<NeumannMode> modes, int n_max,
                                        size_t dim_limit = kDimLimit);
    static TruncatedFockSpace fixed_total(std::vector<NeumannMode> modes, int n,
                                          size_t dim_limit = kDimLimit);

    size_t dim() const { return basis_.size(); }
    size_t mode_count() const { return modes_.size(); }
    const std::vector<NeumannMode>& modes() const { return modes_; }
    int n_max() const { return n_max_; }
    bool fixed_sector() const { return fixed_; }

    const std::vector<int>& occupation(size_t index) const { return basis_[index]; }
    std::optional<size_t> index_of(const std::vector<int>& occ) const;

    // Same truncation style with the occupation bound halved.
    TruncatedFockSpace half_cutoff() const;

  private:
    TruncatedFockSpace() = default;
    void enumerate(size_t dim_limit);
    static uint64_t key(const std::vector<int>& occ);

    std::vector<NeumannMode> modes_;
    int n_max_ = 0;
    bool fixed_ = false;
    std::vector<std::vector<int>> basis_;
    std::unordered_map<uint64_t, uint32_t> index_;
};

struct OperatorMatrix {
    Eigen::MatrixXd mat;
    std::string label;

    double hermiticity_defect() const;
};

// Annihilation/creation pair for one mode; standard sqrt(k) ladder elements.
std::pair<OperatorMatrix, OperatorMatrix> ladder_matrices(
    const TruncatedFockSpace& space, size_t mode_index);

// V_ell^{pqrs} = <u_p (x) u_q, V_ell u_r (x) u_s>; radial-in-difference
// quadrature with octant-resolved angles. Throws if one refinement pass
// moves the value by more than stability_tol.
double interaction_coefficient(const RadialPotential& V, double ell,
                               const NeumannMode& p, const NeumannMode& q,
                               const NeumannMode& r, const NeumannMode& s,
                               double stability_tol = 1e-6);

// H = sum_j A_j n_j + (1/2) sum_j B_j (a_j* a_j* + a_j a_j) + constant.
OperatorMatrix build_quadratic_hamiltonian(const TruncatedFockSpace& space,
                                           std::span<const double> A,
                                           std::span<const double> B,
                                           double constant);

// Quadratic box Hamiltonian with A_p, B_p from the dispersion data and the
// constant (1/2) sum_p B_p^2/(2 p^2); the zero mode must not be present.
OperatorMatrix build_h_bog(const BogParams& params, const TruncatedFockSpace& space);

// Full interacting Hamiltonian on a fixed-particle sector.
OperatorMatrix build_full_h(const RadialPotential& V, double ell,
                            const TruncatedFockSpace& space);

struct SpectralResult {
    std::vector<double> eigenvalues;  // ascending
    double shift_vs_half_cutoff = 0.0;
    bool converged = false;
};

// Dense symmetric solve; refuses dim > 5000.
std::vector<double> solve_spectrum(const OperatorMatrix& op);

// Solve plus truncation-bias report: rebuilds on the half-cutoff space and
// records the largest shift among the lowest 5 eigenvalues.
SpectralResult solve_with_convergence(
    const std::function<OperatorMatrix(const TruncatedFockSpace&)>& build,
    const TruncatedFockSpace& space, double shift_tol = 1e-8);

// F = -T log sum_k exp(-E_k/(T ell^2)), log-sum-exp anchored at the ground
// state; T = 0 gives E_0 / ell^2.
double gibbs_free_energy(std::span<const double> eigenvalues, double T, double ell);

// Slack tr(H G) - T ell^2 S(G) - ell^2 F >= 0 of the Gibbs variational
// principle; the trial state must be PSD with unit trace.
double gibbs_variational_check(const OperatorMatrix& H, const Eigen::MatrixXd& trial,
                               double T, double ell);

}  // namespace bosegas
