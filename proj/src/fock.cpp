#include "bosegas/fock.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bosegas/gauss.hpp"

namespace bosegas {

// ---------------------------------------------------------------------------
// Basis
// ---------------------------------------------------------------------------

uint64_t TruncatedFockSpace::key(const std::vector<int>& occ) {
    uint64_t k = 0;
    for (int v : occ) k = (k << 8) | static_cast<uint64_t>(v & 0xff);
    return k;
}

void TruncatedFockSpace::enumerate(size_t dim_limit) {
    if (modes_.empty() || modes_.size() > 8)
        throw std::invalid_argument("TruncatedFockSpace: need 1..8 modes");
    if (n_max_ < 0 || n_max_ > 255)
        throw std::invalid_argument("TruncatedFockSpace: occupation bound out of range");
    std::vector<int> occ(modes_.size(), 0);
    // Lexicographic enumeration over occupation vectors.
    std::function<void(size_t, int)> rec = [&](size_t mode, int used) {
        if (mode == modes_.size()) {
            if (fixed_ && used != n_max_) return;
            basis_.push_back(occ);
            return;
        }
        for (int k = 0; k + used <= n_max_; ++k) {
            occ[mode] = k;
            rec(mode + 1, used + k);
        }
        occ[mode] = 0;
    };
    rec(0, 0);
    if (basis_.size() > dim_limit)
        throw std::invalid_argument("TruncatedFockSpace: dimension " +
                                    std::to_string(basis_.size()) + " exceeds limit " +
                                    std::to_string(dim_limit));
    index_.reserve(basis_.size());
    for (size_t i = 0; i < basis_.size(); ++i)
        index_.emplace(key(basis_[i]), static_cast<uint32_t>(i));
}

TruncatedFockSpace TruncatedFockSpace::max_total(std::vector<NeumannMode> modes,
                                                 int n_max, size_t dim_limit) {
    TruncatedFockSpace space;
    space.modes_ = std::move(modes);
    space.n_max_ = n_max;
    space.fixed_ = false;
    space.enumerate(dim_limit);
    return space;
}

TruncatedFockSpace TruncatedFockSpace::fixed_total(std::vector<NeumannMode> modes,
                                                   int n, size_t dim_limit) {
    TruncatedFockSpace space;
    space.modes_ = std::move(modes);
    space.n_max_ = n;
    space.fixed_ = true;
    space.enumerate(dim_limit);
    return space;
}

std::optional<size_t> TruncatedFockSpace::index_of(const std::vector<int>& occ) const {
    if (occ.size() != modes_.size()) return std::nullopt;
    for (int v : occ)
        if (v < 0 || v > n_max_) return std::nullopt;
    auto it = index_.find(key(occ));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

TruncatedFockSpace TruncatedFockSpace::half_cutoff() const {
    return fixed_ ? fixed_total(modes_, n_max_ / 2) : max_total(modes_, n_max_ / 2);
}

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

double OperatorMatrix::hermiticity_defect() const {
    return (mat - mat.transpose()).cwiseAbs().maxCoeff();
}

std::pair<OperatorMatrix, OperatorMatrix> ladder_matrices(
    const TruncatedFockSpace& space, size_t mode_index) {
    if (mode_index >= space.mode_count())
        throw std::invalid_argument("ladder_matrices: mode index out of range");
    const size_t dim = space.dim();
    OperatorMatrix a{Eigen::MatrixXd::Zero(dim, dim), "a"};
    for (size_t col = 0; col < dim; ++col) {
        std::vector<int> occ = space.occupation(col);
        if (occ[mode_index] == 0) continue;
        const double amp = std::sqrt(static_cast<double>(occ[mode_index]));
        occ[mode_index] -= 1;
        if (auto row = space.index_of(occ)) a.mat(*row, col) = amp;
    }
    OperatorMatrix adag{a.mat.transpose(), "a_dag"};
    return {std::move(a), std::move(adag)};
}

namespace {

// 1-d mode-product integrals in the difference variable. With
// e_k(u) = cos(pi k (u + 1/2)) the product of two mode factors expands into
// at most two e_k terms; the y-integral of e_k1(y + t) e_k2(y) over the
// overlap interval has an elementary antiderivative.
struct CosTerm {
    int k;
    double coef;
};

inline int product_terms(int a, int b, CosTerm out[2]) {
    if (a == 0 && b == 0) {
        out[0] = {0, 1.0};
        return 1;
    }
    if (a == 0 || b == 0) {
        out[0] = {a + b, M_SQRT2};
        return 1;
    }
    out[0] = {a + b, 1.0};
    out[1] = {std::abs(a - b), 1.0};
    return 2;
}

// int_{u0}^{u1} cos(pi k u) du and sin counterpart, u = y + 1/2.
inline double int_cos(int k, double u0, double u1) {
    if (k == 0) return u1 - u0;
    return (std::sin(M_PI * k * u1) - std::sin(M_PI * k * u0)) / (M_PI * k);
}
inline double int_sin(int k, double u0, double u1) {
    if (k == 0) return 0.0;
    return (std::cos(M_PI * k * u0) - std::cos(M_PI * k * u1)) / (M_PI * k);
}

// int e_k1(y + t) e_k2(y) dy over y in [lo, hi].
double shifted_pair_integral(int k1, int k2, double t, double lo, double hi) {
    const double u0 = lo + 0.5, u1 = hi + 0.5;
    const double cc = 0.5 * (int_cos(k1 + k2, u0, u1) + int_cos(k1 - k2, u0, u1));
    const double sc = 0.5 * (int_sin(k1 + k2, u0, u1) + int_sin(k1 - k2, u0, u1));
    return std::cos(M_PI * k1 * t) * cc - std::sin(M_PI * k1 * t) * sc;
}

// w_d(t) = int c_p(y+t) c_r(y+t) c_q(y) c_s(y) dy over the overlap of the
// unit interval with its t-shift.
double pair_overlap(int p, int r, int q, int s, double t) {
    const double lo = -0.5 + std::max(0.0, -t);
    const double hi = 0.5 - std::max(0.0, t);
    if (lo >= hi) return 0.0;
    CosTerm xs[2], ys[2];
    const int nx = product_terms(p, r, xs);
    const int ny = product_terms(q, s, ys);
    double sum = 0.0;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            sum += xs[i].coef * ys[j].coef *
                   shifted_pair_integral(xs[i].k, ys[j].k, t, lo, hi);
    return sum;
}

double interaction_quadrature(const RadialPotential& Vl, double reach,
                              const NeumannMode& p, const NeumannMode& q,
                              const NeumannMode& r, const NeumannMode& s,
                              int radial_order, int angular_order) {
    // t in spherical coordinates, angular rule split per octant so the
    // |t_d| kinks of the overlap lengths stay inside smooth pieces.
    std::vector<double> rb{0.0};
    for (double b : Vl.breakpoints())
        if (b > 0.0 && b < reach) rb.push_back(b);
    rb.push_back(reach);
    std::sort(rb.begin(), rb.end());
    rb.erase(std::unique(rb.begin(), rb.end()), rb.end());
    Grid1D rg = composite_grid(rb, radial_order);

    const GaussRule& gu = gauss_rule(angular_order);
    const GaussRule& gp = gauss_rule(angular_order);
    double total = 0.0;
    for (size_t ir = 0; ir < rg.size(); ++ir) {
        const double sr = rg.x[ir];
        const double v = Vl(sr);
        if (v == 0.0) continue;
        double shell = 0.0;
        for (int oct = 0; oct < 8; ++oct) {
            const double su = (oct & 1) ? -1.0 : 1.0;
            const double phi0 = 0.5 * M_PI * ((oct >> 1) & 3);
            for (int iu = 0; iu < angular_order; ++iu) {
                const double u = 0.5 * (gu.nodes[iu] + 1.0) * su;  // cos(theta)
                const double wu = 0.5 * gu.weights[iu];
                const double st = std::sqrt(std::max(0.0, 1.0 - u * u));
                for (int ip = 0; ip < angular_order; ++ip) {
                    const double phi = phi0 + 0.25 * M_PI * (gp.nodes[ip] + 1.0);
                    const double wp = 0.25 * M_PI * gp.weights[ip];
                    const double t1 = sr * st * std::cos(phi);
                    const double t2 = sr * st * std::sin(phi);
                    const double t3 = sr * u;
                    const double w = pair_overlap(p.m[0], r.m[0], q.m[0], s.m[0], t1) *
                                     pair_overlap(p.m[1], r.m[1], q.m[1], s.m[1], t2) *
                                     pair_overlap(p.m[2], r.m[2], q.m[2], s.m[2], t3);
                    shell += wu * wp * w;
                }
            }
        }
        total += rg.w[ir] * sr * sr * v * shell;
    }
    return total;
}

}  // namespace

double interaction_coefficient(const RadialPotential& V, double ell,
                               const NeumannMode& p, const NeumannMode& q,
                               const NeumannMode& r, const NeumannMode& s,
                               double stability_tol) {
    if (ell <= 0.0) throw std::invalid_argument("interaction_coefficient: ell > 0");
    if (V.is_zero()) return 0.0;
    const RadialPotential Vl = V.rescaled(ell);
    const double reach = V.range() / ell;
    const double coarse = interaction_quadrature(Vl, reach, p, q, r, s, 8, 8);
    const double fine = interaction_quadrature(Vl, reach, p, q, r, s, 16, 12);
    if (std::abs(fine - coarse) > stability_tol * (1.0 + std::abs(fine)))
        throw std::runtime_error(
            "interaction_coefficient: quadrature budget exceeded (shift " +
            std::to_string(std::abs(fine - coarse)) + ")");
    return fine;
}

OperatorMatrix build_quadratic_hamiltonian(const TruncatedFockSpace& space,
                                           std::span<const double> A,
                                           std::span<const double> B,
                                           double constant) {
    const size_t M = space.mode_count();
    if (A.size() != M || B.size() != M)
        throw std::invalid_argument("build_quadratic_hamiltonian: coefficient size");
    if (space.fixed_sector())
        throw std::invalid_argument(
            "build_quadratic_hamiltonian: pair terms need the max-total truncation");
    const size_t dim = space.dim();
    OperatorMatrix H{Eigen::MatrixXd::Zero(dim, dim), "H_quadratic"};
    for (size_t col = 0; col < dim; ++col) {
        const std::vector<int>& occ = space.occupation(col);
        double diag = constant;
        for (size_t j = 0; j < M; ++j) diag += A[j] * occ[j];
        H.mat(col, col) += diag;
        for (size_t j = 0; j < M; ++j) {
            if (B[j] == 0.0) continue;
            // pair creation a*a*; annihilation enters as the transpose
            std::vector<int> up = occ;
            up[j] += 2;
            if (auto row = space.index_of(up)) {
                const double amp =
                    0.5 * B[j] * std::sqrt(double(occ[j] + 1) * double(occ[j] + 2));
                H.mat(*row, col) += amp;
                H.mat(col, *row) += amp;
            }
        }
    }
    return H;
}

OperatorMatrix build_h_bog(const BogParams& params, const TruncatedFockSpace& space) {
    const size_t M = space.mode_count();
    std::vector<double> A(M), B(M);
    double constant = 0.0;
    for (size_t j = 0; j < M; ++j) {
        const NeumannMode& mode = space.modes()[j];
        if (mode.is_zero())
            throw std::invalid_argument("build_h_bog: zero mode not allowed");
        const double pn = std::sqrt(mode.p_norm_sq());
        A[j] = params.coeff_A(pn);
        B[j] = params.coeff_B(pn);
        constant += 0.5 * B[j] * B[j] / (2.0 * mode.p_norm_sq());
    }
    OperatorMatrix H = build_quadratic_hamiltonian(space, A, B, constant);
    H.label = "H_bog";
    return H;
}

OperatorMatrix build_full_h(const RadialPotential& V, double ell,
                            const TruncatedFockSpace& space) {
    if (!space.fixed_sector())
        throw std::invalid_argument("build_full_h: needs a fixed-particle sector");
    const size_t M = space.mode_count();
    const size_t dim = space.dim();

    // Interaction tensor with its symmetries filled from one representative.
    std::vector<double> tensor(M * M * M * M, 0.0);
    auto idx = [M](size_t p, size_t q, size_t r, size_t s) {
        return ((p * M + q) * M + r) * M + s;
    };
    for (size_t p = 0; p < M; ++p)
        for (size_t q = 0; q < M; ++q)
            for (size_t r = 0; r < M; ++r)
                for (size_t s = 0; s < M; ++s) {
                    const size_t i = idx(p, q, r, s);
                    const size_t rep = std::min({i, idx(q, p, s, r), idx(r, s, p, q),
                                                 idx(s, r, q, p)});
                    if (rep < i) {
                        tensor[i] = tensor[rep];
                        continue;
                    }
                    tensor[i] = V.is_zero()
                                    ? 0.0
                                    : interaction_coefficient(V, ell, space.modes()[p],
                                                              space.modes()[q],
                                                              space.modes()[r],
                                                              space.modes()[s]);
                }

    OperatorMatrix H{Eigen::MatrixXd::Zero(dim, dim), "H_full"};
    for (size_t col = 0; col < dim; ++col) {
        const std::vector<int>& occ = space.occupation(col);
        double kinetic = 0.0;
        for (size_t j = 0; j < M; ++j) kinetic += space.modes()[j].p_norm_sq() * occ[j];
        H.mat(col, col) += kinetic;
        // (1/2) V^{pqrs} a_p* a_q* a_r a_s, annihilation applied right to left
        for (size_t s = 0; s < M; ++s) {
            if (occ[s] == 0) continue;
            for (size_t r = 0; r < M; ++r) {
                std::vector<int> mid = occ;
                double amp = std::sqrt(double(mid[s]));
                mid[s] -= 1;
                if (mid[r] == 0) continue;
                amp *= std::sqrt(double(mid[r]));
                mid[r] -= 1;
                for (size_t q = 0; q < M; ++q)
                    for (size_t p = 0; p < M; ++p) {
                        const double v = tensor[idx(p, q, r, s)];
                        if (v == 0.0) continue;
                        std::vector<int> out = mid;
                        double amp2 = amp * std::sqrt(double(out[q] + 1));
                        out[q] += 1;
                        amp2 *= std::sqrt(double(out[p] + 1));
                        out[p] += 1;
                        if (auto row = space.index_of(out))
                            H.mat(*row, col) += 0.5 * v * amp2;
                    }
            }
        }
    }
    return H;
}

std::vector<double> solve_spectrum(const OperatorMatrix& op) {
    const size_t dim = op.mat.rows();
    if (dim > TruncatedFockSpace::kDimLimit)
        throw std::invalid_argument("solve_spectrum: dimension " + std::to_string(dim) +
                                    " above the dense solver contract (5000)");
    if (op.hermiticity_defect() > 1e-10)
        throw std::runtime_error("solve_spectrum: matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op.mat,
                                                          Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("solve_spectrum: eigensolver failed");
    std::vector<double> ev(solver.eigenvalues().data(),
                           solver.eigenvalues().data() + dim);
    std::sort(ev.begin(), ev.end());
    return ev;
}

SpectralResult solve_with_convergence(
    const std::function<OperatorMatrix(const TruncatedFockSpace&)>& build,
    const TruncatedFockSpace& space, double shift_tol) {
    SpectralResult res;
    res.eigenvalues = solve_spectrum(build(space));
    TruncatedFockSpace half = space.half_cutoff();
    std::vector<double> ev_half = solve_spectrum(build(half));
    const size_t k = std::min<size_t>({5, res.eigenvalues.size(), ev_half.size()});
    for (size_t i = 0; i < k; ++i)
        res.shift_vs_half_cutoff = std::max(
            res.shift_vs_half_cutoff, std::abs(res.eigenvalues[i] - ev_half[i]));
    res.converged = res.shift_vs_half_cutoff < shift_tol;
    return res;
}

double gibbs_free_energy(std::span<const double> eigenvalues, double T, double ell) {
    if (eigenvalues.empty())
        throw std::invalid_argument("gibbs_free_energy: empty spectrum");
    const double e0 = *std::min_element(eigenvalues.begin(), eigenvalues.end());
    const double ell2 = ell * ell;
    if (T == 0.0) return e0 / ell2;
    double z = 0.0;
    for (double e : eigenvalues) z += std::exp(-(e - e0) / (T * ell2));
    return e0 / ell2 - T * std::log(z);
}

double gibbs_variational_check(const OperatorMatrix& H, const Eigen::MatrixXd& trial,
                               double T, double ell) {
    if (trial.rows() != H.mat.rows() || trial.cols() != H.mat.cols())
        throw std::invalid_argument("gibbs_variational_check: size mismatch");
    if ((trial - trial.transpose()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("gibbs_variational_check: trial not symmetric");
    if (std::abs(trial.trace() - 1.0) > 1e-8)
        throw std::invalid_argument("gibbs_variational_check: trial not unit trace");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(trial);
    const auto& lam = solver.eigenvalues();
    double entropy = 0.0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam(i) < -1e-10)
            throw std::invalid_argument("gibbs_variational_check: trial not PSD");
        if (lam(i) > 0.0) entropy -= lam(i) * std::log(lam(i));
    }
    const double energy = (H.mat * trial).trace();
    const double F = gibbs_free_energy(solve_spectrum(H), T, ell);
    return energy - T * ell * ell * entropy - ell * ell * F;
}

}  // namespace bosegas
