#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <memory>
#include <random>
#include <string>

#include "bosegas/cutoff.hpp"
#include "bosegas/fit.hpp"
#include "bosegas/gauss.hpp"
#include "bosegas/modified_scattering.hpp"
#include "bosegas/neumann.hpp"
#include "bosegas/potential.hpp"
#include "bosegas/scattering.hpp"

using namespace bosegas;

namespace {

// Closed-form barrier oracle: inside, g = sinh(kr)/k with k = sqrt(V0/2);
// matching at R gives a = R - tanh(kR)/k.
double barrier_scattering_length(double v0, double R) {
    const double k = std::sqrt(0.5 * v0);
    return R - std::tanh(k * R) / k;
}

}  // namespace

TEST_SUITE_BEGIN("scattering");

TEST_CASE("barrier scattering length matches the closed form") {
    RadialPotential V = RadialPotential::barrier(2.0, 1.0);
    ScatteringSolution sol(V);
    CHECK(sol.scattering_length() ==
          doctest::Approx(barrier_scattering_length(2.0, 1.0)).epsilon(1e-10));
    CHECK(sol.scattering_length() == doctest::Approx(0.2384058).epsilon(1e-6));
    CHECK(sol.residual() < 1e-9);

    // a second barrier for good measure
    RadialPotential V2 = RadialPotential::barrier(8.0, 0.5);
    CHECK(scattering_length(V2) ==
          doctest::Approx(barrier_scattering_length(8.0, 0.5)).epsilon(1e-10));
}

TEST_CASE("zero potential gives a = 0 and omega = 0") {
    RadialPotential V = RadialPotential::barrier(0.0, 1.0);
    ScatteringSolution sol(V);
    CHECK(sol.scattering_length() == doctest::Approx(0.0));
    for (double r : {0.2, 0.7, 1.9}) CHECK(std::abs(sol.omega(r)) < 1e-13);
}

TEST_CASE("negative barrier strength is rejected") {
    CHECK_THROWS_AS(RadialPotential::barrier(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("tabulated potentials clamp negatives with a warning") {
    RadialPotential V =
        RadialPotential::tabulated({{0.0, 2.0}, {0.5, -0.3}, {1.0, 0.0}});
    CHECK(V(0.5) == 0.0);
    CHECK(V.warnings().size() >= 1);
    RadialPotential up = RadialPotential::tabulated({{0.0, 1.0}, {0.5, 2.0}, {1.0, 0.0}});
    bool warned = false;
    for (const auto& w : up.warnings()) warned = warned || w.find("non-increasing") != std::string::npos;
    CHECK(warned);
}

TEST_CASE("integral identity int V (1 - omega) = 8 pi a") {
    std::vector<RadialPotential> pots{
        RadialPotential::barrier(2.0, 1.0),
        RadialPotential::tabulated({{0.0, 3.0}, {1.0, 0.0}}),
        RadialPotential::tabulated({{0.0, 3.0}, {0.3, 3.0}, {0.5, 1.2}, {1.0, 0.0}})};
    for (const auto& V : pots) {
        ScatteringSolution sol(V);
        CHECK(sol.quadrature_scattering_length(V) ==
              doctest::Approx(sol.scattering_length()).epsilon(1e-9));
    }
}

TEST_CASE("scaling law: a(V_ell) = a(V)/ell") {
    RadialPotential V = RadialPotential::barrier(2.0, 1.0);
    const double a = scattering_length(V);
    for (double ell : {2.0, 10.0, 100.0}) {
        const double a_scaled = scattering_length(V.rescaled(ell));
        CHECK(a_scaled * ell == doctest::Approx(a).epsilon(1e-9));
    }
}

TEST_CASE("omega is harmonic outside the support") {
    RadialPotential V = RadialPotential::barrier(2.0, 1.0);
    ScatteringSolution sol(V);
    const double a = sol.scattering_length();
    for (double r = 1.05; r <= 3.0; r += 0.05)
        CHECK(sol.omega(r) == doctest::Approx(a / r).epsilon(1e-9));
    // 0 <= omega <= 1 on the grid
    for (double r = 0.01; r < 3.0; r += 0.01) {
        CHECK(sol.omega(r) >= -1e-12);
        CHECK(sol.omega(r) <= 1.0 + 1e-12);
    }
    // g convex and vanishing at zero
    CHECK(std::abs(sol.g(0.0)) < 1e-15);
    for (double r = 0.1; r < 0.95; r += 0.1) {
        const double dd = sol.g(r + 0.01) - 2 * sol.g(r) + sol.g(r - 0.01);
        CHECK(dd >= -1e-12);
    }
}

TEST_CASE("cutoff profile identity and smoothness") {
    CutoffProfile chi;
    CHECK(chi.moment_identity() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(chi.value(0.3) == 1.0);
    CHECK(chi.value(1.2) == 0.0);
    // continuity at the joins
    for (double s : {0.5, 1.0}) {
        CHECK(chi.value(s - 1e-9) == doctest::Approx(chi.value(s + 1e-9)).epsilon(1e-6));
        CHECK(std::abs(chi.d1(s - 1e-9) - chi.d1(s + 1e-9)) < 1e-5);
        CHECK(std::abs(chi.d2(s - 1e-9) - chi.d2(s + 1e-9)) < 1e-3);
    }
}

TEST_CASE("lambda window is enforced") {
    auto sol = std::make_shared<ScatteringSolution>(RadialPotential::barrier(2.0, 1.0));
    CHECK_THROWS_AS(ModifiedScattering(sol, 10.0, 0.15), std::invalid_argument);
    CHECK_THROWS_AS(ModifiedScattering(sol, 100.0, 0.30), std::invalid_argument);
    CHECK_NOTHROW(ModifiedScattering(sol, 100.0, 0.10));
}

TEST_CASE("epsilon support and normalization") {
    ModifiedScattering ms(RadialPotential::barrier(2.0, 1.0), 100.0, 0.2);
    const double lam = ms.lambda();
    CHECK(ms.epsilon(lam / 4.0) == 0.0);
    CHECK(ms.epsilon(2.0 * lam) == 0.0);
    CHECK(ms.epsilon(0.7 * lam) != 0.0);

    auto bp = make_breakpoints(0.5 * lam, lam, 8);
    const double mass =
        4.0 * M_PI * gauss_panels([&](double r) { return ms.epsilon(r) * r * r; }, bp, 12);
    CHECK(mass == doctest::Approx(8.0 * M_PI * ms.a() / 100.0).epsilon(1e-10));
    // with a = 1, ell = 100 the mass is 8 pi / 100 = 0.2513274...
    CHECK(mass / ms.a() == doctest::Approx(0.2513274).epsilon(1e-6));
}

TEST_CASE("epsilon_hat at zero, closed form vs quadrature, and decay") {
    ModifiedScattering ms(RadialPotential::barrier(2.0, 1.0), 100.0, 0.2);
    const double target = 8.0 * M_PI * ms.a() / 100.0;
    CHECK(ms.epsilon_hat(0.0) == doctest::Approx(target).epsilon(1e-12));

    // the large-argument antiderivative branch agrees with direct quadrature
    for (double p : {60.0, 130.0, 400.0}) {
        auto bp = make_breakpoints(0.1, 0.2, 16 + int(p * 0.2 / M_PI));
        const double direct =
            4.0 * M_PI *
            gauss_panels([&](double r) { return ms.epsilon(r) * r * r * sinc(p * r); },
                         bp, 12);
        CHECK(ms.epsilon_hat(p) == doctest::Approx(direct).epsilon(1e-9));
    }

    // Riemann-Lebesgue decay
    CHECK(std::abs(ms.epsilon_hat(2000.0)) < 1e-3 * target);
    CHECK(std::abs(ms.epsilon_hat(20000.0)) < 1e-5 * target);

    // |eps_hat(p) - eps_hat(0)| quadratic at small p: slope 2 in lambda*p
    std::vector<double> lp, diff;
    for (double x : {1e-3, 3e-3, 1e-2, 3e-2, 0.1, 0.3}) {
        lp.push_back(x);
        diff.push_back(std::abs(ms.epsilon_hat(x / ms.lambda()) - target));
    }
    LinearFit fit = loglog_fit(lp, diff);
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("epsilon_hat cached table matches direct evaluation") {
    ModifiedScattering ms(RadialPotential::barrier(2.0, 1.0), 50.0, 0.2);
    for (double p : {0.0, 0.37, 2.2, 17.3, 121.7})
        CHECK(ms.epsilon_hat_cached(p) ==
              doctest::Approx(ms.epsilon_hat(p)).epsilon(1e-9));
}

TEST_CASE("omega_hat: zero potential, p = 0 cross-check, Monte Carlo oracle") {
    ModifiedScattering zero(RadialPotential::barrier(0.0, 1.0), 50.0, 0.2);
    CHECK(std::abs(zero.omega_hat(0.0)) < 1e-14);
    CHECK(std::abs(zero.omega_hat(3.0)) < 1e-14);

    ModifiedScattering ms(RadialPotential::barrier(2.0, 1.0), 50.0, 0.2);
    // p = 0 value against a second quadrature scheme (adaptive instead of panels)
    const double direct = 4.0 * M_PI *
                          adaptive_gauss([&](double r) { return ms.omega_lambda(r) * r * r; },
                                         0.0, 0.2, 1e-14, 1e-12);
    CHECK(ms.omega_hat(0.0) == doctest::Approx(direct).epsilon(1e-10));
    // scaling bound omega_hat(0) <= C lambda^2 / ell with a modest constant
    CHECK(ms.omega_hat(0.0) <= 10.0 * 0.2 * 0.2 / 50.0);
    CHECK(ms.omega_hat(0.0) > 0.0);

    // Monte Carlo oracle for the 3-d integral int omega_ll(x) cos(p.x) dx,
    // radially importance-sampled with density ~ r on [0, lambda].
    const double lam = ms.lambda();
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const Vec3 pvec{1.3, -0.4, 2.0};
    const double pn = std::sqrt(1.3 * 1.3 + 0.16 + 4.0);
    const int N = 4000000;
    double acc = 0.0;
    for (int i = 0; i < N; ++i) {
        const double r = lam * std::sqrt(uni(rng));
        const double u = 2.0 * uni(rng) - 1.0;
        const double phi = 2.0 * M_PI * uni(rng);
        const double su = std::sqrt(1.0 - u * u);
        const double x = r * su * std::cos(phi), y = r * su * std::sin(phi),
                     z = r * u;
        const double dot = pvec[0] * x + pvec[1] * y + pvec[2] * z;
        // weight = f / pdf, pdf(r, angles) = (2 r / lam^2) / (4 pi r^2)
        acc += ms.omega_lambda(r) * std::cos(dot) * 2.0 * M_PI * lam * lam * r;
    }
    const double mc = acc / N;
    CHECK(ms.omega_hat(pn) == doctest::Approx(mc).epsilon(1e-4));
}

TEST_CASE("potential file loader parses comments and separators") {
    const char* path = "test_potential.tmp";
    {
        std::FILE* f = std::fopen(path, "w");
        std::fputs("# radial potential\n0.0, 3.0\n0.5 1.5\n1.0,0.0\n", f);
        std::fclose(f);
    }
    RadialPotential V = RadialPotential::from_file(path);
    CHECK(V.range() == doctest::Approx(1.0));
    CHECK(V(0.25) == doctest::Approx(2.25));
    std::remove(path);
}

TEST_SUITE_END();
