#include "bosegas/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "bosegas/bogoliubov.hpp"
#include "bosegas/fit.hpp"
#include "bosegas/fock.hpp"
#include "bosegas/gauss.hpp"
#include "bosegas/kernel.hpp"
#include "bosegas/report.hpp"
#include "bosegas/thermo.hpp"

namespace bosegas {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double v) { return format_double(v); }

// --- 1: scattering closed form and the integral identity --------------------

CheckResult check_scattering() {
    CheckResult res{1, "scattering closed form + integral identity"};
    const double a_exact = 1.0 - std::tanh(1.0);  // barrier kappa = 1
    RadialPotential barrier = RadialPotential::barrier(2.0, 1.0);
    ScatteringSolution sol(barrier);
    const double a_err = std::abs(sol.scattering_length() - a_exact);

    double identity_err = 0.0;
    std::vector<RadialPotential> pots{
        barrier,
        RadialPotential::tabulated({{0.0, 3.0}, {1.0, 0.0}}),
        RadialPotential::tabulated({{0.0, 3.0}, {0.3, 3.0}, {0.5, 1.2}, {1.0, 0.0}})};
    for (const auto& V : pots) {
        ScatteringSolution s(V);
        const double quad = s.quadrature_scattering_length(V);
        identity_err = std::max(identity_err,
                                std::abs(quad / s.scattering_length() - 1.0));
    }
    res.measured = std::max(a_err, identity_err);
    res.tolerance = 1e-8;
    res.pass = res.measured <= res.tolerance;
    res.detail = "|a - (1-tanh 1)| = " + fmt(a_err) +
                 ", worst identity defect = " + fmt(identity_err);
    return res;
}

// --- 2: renormalized potential normalization --------------------------------

CheckResult check_epsilon_mass() {
    CheckResult res{2, "int eps = 8 pi a / ell on an (ell, lambda) grid"};
    auto sol = std::make_shared<ScatteringSolution>(RadialPotential::barrier(2.0, 1.0));
    double worst = 0.0;
    for (double ell : {20.0, 50.0, 100.0})
        for (double lambda : {0.12, 0.18, 0.24}) {
            ModifiedScattering ms(sol, ell, lambda);
            auto bp = make_breakpoints(0.5 * lambda, lambda, 8);
            const double mass =
                4.0 * M_PI *
                gauss_panels([&](double r) { return ms.epsilon(r) * r * r; }, bp, 12);
            const double target = 8.0 * M_PI * ms.a() / ell;
            worst = std::max(worst, std::abs(mass / target - 1.0));
        }
    res.measured = worst;
    res.tolerance = 1e-8;
    res.pass = res.measured <= res.tolerance;
    res.detail = "worst relative defect over 3x3 grid";
    return res;
}

// --- 3: LHY half-space integral ---------------------------------------------

CheckResult check_lhy_constant() {
    CheckResult res{3, "half-space integral of g = 512 pi / 15"};
    const double target = 512.0 * M_PI / 15.0;
    const double value = lhy_g_half_space_integral();
    res.measured = std::abs(value / target - 1.0);
    res.tolerance = 1e-8;
    res.pass = res.measured <= res.tolerance;
    res.detail = "value = " + fmt(value) + ", target = " + fmt(target);
    return res;
}

// --- 4: kernel diagonality ---------------------------------------------------

CheckResult check_kernel_diagonality() {
    CheckResult res{4, "mode matrix of K diagonal with -n omega_hat(p)"};
    auto ms = std::make_shared<ModifiedScattering>(RadialPotential::barrier(8.0, 0.5),
                                                   25.0, 0.12);
    SymmetrizedKernel kernel(3000.0, ms);
    ModeLattice lattice(3, true);
    ModeMatrixResult mm = kernel_mode_matrix(kernel, lattice, BoxQuadrature{}, true);
    res.measured = std::max(mm.max_offdiag, mm.max_diag_rel_err);
    res.tolerance = 1e-6;
    res.pass = res.measured <= res.tolerance;
    res.detail = "max offdiag = " + fmt(mm.max_offdiag) +
                 ", max diag rel err = " + fmt(mm.max_diag_rel_err) +
                 ", refinement shift = " + fmt(mm.stability);
    return res;
}

// --- 5: Bogoliubov oracle equivalence ----------------------------------------

CheckResult check_bogoliubov_oracle() {
    CheckResult res{5, "truncated Fock spectra match the diagonalized form"};
    // Single mode, A = 5, B = 3, constant dropped: spectrum 4m - 1/2.
    NeumannMode mode{{1, 0, 0}};
    auto space1 = TruncatedFockSpace::max_total({mode}, 80);
    const double A[] = {5.0}, B[] = {3.0};
    auto ev1 = solve_spectrum(build_quadratic_hamiltonian(space1, A, B, 0.0));
    double err1 = 0.0;
    for (int m = 0; m < 10; ++m)
        err1 = std::max(err1, std::abs(ev1[m] - (4.0 * m - 0.5)));

    // Two modes with coefficients from the scattering data.
    auto ms = std::make_shared<ModifiedScattering>(RadialPotential::barrier(2.0, 1.0),
                                                   50.0, 0.2);
    BogParams params(ms, 100.0, 0.0);
    std::vector<NeumannMode> modes{{{1, 0, 0}}, {{1, 1, 0}}};
    auto space2 = TruncatedFockSpace::max_total(modes, 64);
    auto ev2 = solve_spectrum(build_h_bog(params, space2));

    double e_bog = 0.0;
    std::vector<Rotation> rots;
    for (const auto& m : modes) {
        const double p = std::sqrt(m.p_norm_sq());
        const double Ap = params.coeff_A(p), Bp = params.coeff_B(p);
        Rotation rot = rotation(Ap, Bp);
        rots.push_back(rot);
        e_bog += 0.5 * (rot.e - Ap) + 0.5 * Bp * Bp / (2.0 * p * p);
    }
    std::vector<double> predicted;
    for (int m1 = 0; m1 <= 6; ++m1)
        for (int m2 = 0; m2 <= 6; ++m2)
            predicted.push_back(e_bog + m1 * rots[0].e + m2 * rots[1].e);
    std::sort(predicted.begin(), predicted.end());
    double err2 = 0.0;
    for (int k = 0; k < 8; ++k) err2 = std::max(err2, std::abs(ev2[k] - predicted[k]));

    res.measured = std::max(err1, err2 * 0.1);  // scales share the 1e-8 budget
    res.tolerance = 1e-8;
    res.pass = err1 <= 1e-8 && err2 <= 1e-7;
    res.detail = "single-mode err = " + fmt(err1) + " (tol 1e-8), two-mode err = " +
                 fmt(err2) + " (tol 1e-7)";
    return res;
}

// --- 6: Riemann-sum law -------------------------------------------------------

CheckResult check_riemann_law() {
    CheckResult res{6, "riemann_gap slope 1 in hbar at q in {0, 16}"};
    const std::vector<double> hbars{0.5, 0.25, 0.1, 0.05, 0.02};
    double worst = 0.0;
    std::string detail;
    for (double q : {0.0, 16.0}) {
        std::vector<double> gaps;
        for (double h : hbars) gaps.push_back(riemann_gap(h, q));
        LinearFit fit = loglog_fit(hbars, gaps);
        worst = std::max(worst, std::abs(fit.slope - 1.0));
        detail += "q=" + fmt(q) + ": slope " + fmt(fit.slope) + "; ";
    }
    res.measured = worst;
    res.tolerance = 0.15;
    res.pass = res.measured <= res.tolerance;
    res.detail = detail;
    return res;
}

// --- 7: LHY residual scaling --------------------------------------------------

CheckResult check_lhy_residual_scaling() {
    CheckResult res{7, "lattice-vs-LHY residual exponent 2 in n a / ell"};
    const std::vector<double> xs{1.0, 3.0, 10.0, 30.0, 100.0};
    std::vector<double> residuals;
    for (double x : xs) residuals.push_back(std::abs(lhy_residual(x)));
    LinearFit fit = loglog_fit(xs, residuals);
    res.measured = std::abs(fit.slope - 2.0);
    res.tolerance = 0.2;
    res.pass = res.measured <= res.tolerance;
    res.detail = "slope = " + fmt(fit.slope);
    return res;
}

// --- 8: dispersion and e_bog deviation scalings -------------------------------

CheckResult check_dispersion_scaling() {
    CheckResult res{8, "dispersion/e_bog deviation scaling in lambda and n/ell"};
    auto sol = std::make_shared<ScatteringSolution>(RadialPotential::barrier(2.0, 1.0));
    const double ell = 50.0;

    std::vector<double> p_grid;
    for (int i = 1; i <= 1500; ++i) p_grid.push_back(0.04 * i);

    const std::vector<double> lambdas{0.05, 0.07, 0.1, 0.14, 0.2};
    std::vector<double> devs, ebog_l;
    for (double lam : lambdas) {
        auto ms = std::make_shared<ModifiedScattering>(sol, ell, lam);
        BogParams params(ms, 100.0, 0.0);
        devs.push_back(dispersion_deviation(params, p_grid));
        ebog_l.push_back(e_bog_deviation(params, 96).deviation);
    }
    LinearFit disp_fit = loglog_fit(lambdas, devs);
    LinearFit ebog_lambda_fit = loglog_fit(lambdas, ebog_l);

    const std::vector<double> ns{25.0, 35.0, 50.0, 70.0, 100.0};
    std::vector<double> ratios, ebog_n;
    auto ms01 = std::make_shared<ModifiedScattering>(sol, ell, 0.1);
    for (double n : ns) {
        BogParams params(ms01, n, 0.0);
        ratios.push_back(n / ell);
        ebog_n.push_back(e_bog_deviation(params, 96).deviation);
    }
    LinearFit ebog_density_fit = loglog_fit(ratios, ebog_n);

    const bool ok = std::abs(disp_fit.slope - 2.0) <= 0.2 &&
                    ebog_lambda_fit.slope >= 0.7 &&
                    std::abs(ebog_density_fit.slope - 3.0) <= 0.3;
    res.measured = std::abs(disp_fit.slope - 2.0);
    res.tolerance = 0.2;
    res.pass = ok;
    res.detail = "dispersion slope(lambda) = " + fmt(disp_fit.slope) +
                 ", e_bog slope(lambda) = " + fmt(ebog_lambda_fit.slope) +
                 " (need >= 0.7), e_bog slope(n/ell) = " + fmt(ebog_density_fit.slope) +
                 " (need 3 +- 0.3)";
    return res;
}

// --- 9: thermodynamic consistency ---------------------------------------------

CheckResult check_thermo_consistency() {
    CheckResult res{9, "LHY free energy consistency checks"};
    ThermoParams tp{1e-6, 1.0, 0.0};

    const double zero_defect = consistency_zero_T(tp) / lhy_free_energy(tp).total;

    bool monotone = true;
    double prev = lhy_free_energy(tp).total;
    for (int i = 1; i <= 10; ++i) {
        ThermoParams warm = tp;
        warm.T = tp.rho * tp.a * (0.5 * i);
        const double cur = lhy_free_energy(warm).total;
        if (cur > prev + 1e-18) monotone = false;
        prev = cur;
    }

    ThermoParams tp1{1e-6, 1.0, 2e-6};
    ThermoParams tp2{8e-6, 0.5, 8e-6};  // same (Y, T a^2)
    const double f1 = lhy_free_energy(tp1).total * std::pow(tp1.a, 5);
    const double f2 = lhy_free_energy(tp2).total * std::pow(tp2.a, 5);
    const double collapse = std::abs(f1 / f2 - 1.0);

    ThermoParams hot = tp;
    hot.T = tp.rho * tp.a;
    LhyFreeEnergy f = lhy_free_energy(hot);
    const double ratio = std::abs(f.thermal) / f.lhy_correction;
    const bool ratio_ok = ratio >= 0.01 && ratio <= 100.0;

    res.measured = std::max({zero_defect, collapse});
    res.tolerance = 1e-12;
    res.pass = zero_defect <= 1e-14 && monotone && collapse <= 1e-12 && ratio_ok;
    res.detail = "zero-T rel defect = " + fmt(zero_defect) +
                 ", monotone = " + (monotone ? std::string("yes") : std::string("no")) +
                 ", collapse defect = " + fmt(collapse) +
                 ", thermal/LHY ratio at T = rho a = " + fmt(ratio) +
                 " (need 0.01..100)";
    return res;
}

// --- 10: box assembly against the completed square ----------------------------

CheckResult check_box_assembly() {
    CheckResult res{10, "box assembly reproduces 4 pi a rho^2 for f = 4 pi a n^2/ell^3"};
    ThermoParams tp{1e-9, 1.0, 0.0};
    const double target = 4.0 * M_PI * tp.a * tp.rho * tp.rho;
    double worst = 1.0;
    std::string detail = "defect by ell: ";
    for (double n_box : {200.37, 2000.37, 20000.37}) {
        ParameterSchedule sched;
        sched.ell = std::cbrt(n_box / tp.rho);
        sched.mu = 8.0 * M_PI * tp.a * tp.rho;
        sched.n0 = static_cast<int64_t>(20.0 * n_box);
        const double ell3 = sched.ell * sched.ell * sched.ell;
        auto provider = [&](int64_t n) {
            return 4.0 * M_PI * tp.a / ell3 * double(n) * double(n);
        };
        BoxAssemblyResult out = box_assembly(tp, sched, provider);
        worst = std::abs(out.bound / target - 1.0);
        detail += fmt(worst) + " ";
    }
    res.measured = worst;  // finest grid
    res.tolerance = 1e-6;
    res.pass = res.measured <= res.tolerance;
    res.detail = detail;
    return res;
}

// --- 11: Gibbs variational principle ------------------------------------------

CheckResult check_gibbs_variational() {
    CheckResult res{11, "Gibbs slack >= 0 for 100 random trial states"};
    auto ms = std::make_shared<ModifiedScattering>(RadialPotential::barrier(2.0, 1.0),
                                                   50.0, 0.2);
    BogParams params(ms, 100.0, 0.0);
    std::vector<NeumannMode> modes{{{1, 0, 0}}, {{1, 1, 0}}};
    auto space = TruncatedFockSpace::max_total(modes, 12);
    OperatorMatrix H = build_h_bog(params, space);
    const double T = 5.0, ell = 1.0;

    std::mt19937 rng(20260809);
    std::normal_distribution<double> normal(0.0, 1.0);
    const int dim = static_cast<int>(space.dim());
    double min_slack = 1e300;
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::MatrixXd A(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) A(i, j) = normal(rng);
        Eigen::MatrixXd gamma = A * A.transpose();
        gamma /= gamma.trace();
        min_slack = std::min(min_slack, gibbs_variational_check(H, gamma, T, ell));
    }
    res.measured = min_slack;
    res.tolerance = -1e-10;
    res.pass = min_slack >= -1e-10;
    res.detail = "min slack over 100 trials = " + fmt(min_slack);
    return res;
}

}  // namespace

std::vector<CheckResult> run_acceptance(int which) {
    using Check = std::function<CheckResult()>;
    const std::vector<Check> checks{
        check_scattering,       check_epsilon_mass,       check_lhy_constant,
        check_kernel_diagonality, check_bogoliubov_oracle, check_riemann_law,
        check_lhy_residual_scaling, check_dispersion_scaling,
        check_thermo_consistency, check_box_assembly,      check_gibbs_variational};
    std::vector<CheckResult> results;
    for (size_t i = 0; i < checks.size(); ++i) {
        if (which != 0 && which != static_cast<int>(i + 1)) continue;
        auto start = Clock::now();
        CheckResult res = checks[i]();
        res.seconds = std::chrono::duration<double>(Clock::now() - start).count();
        results.push_back(std::move(res));
    }
    return results;
}

bool print_results(std::ostream& os, const std::vector<CheckResult>& results) {
    bool all = true;
    for (const auto& res : results) {
        os << (res.pass ? "[PASS] " : "[FAIL] ") << res.criterion << " " << res.name
           << ": measured " << format_double(res.measured) << " vs tolerance "
           << format_double(res.tolerance) << " (" << res.detail << ") ["
           << format_double(res.seconds) << " s]\n";
        all = all && res.pass;
    }
    return all;
}

}  // namespace bosegas
