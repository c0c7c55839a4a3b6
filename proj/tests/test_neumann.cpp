#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "bosegas/fit.hpp"
#include "bosegas/gauss.hpp"
#include "bosegas/kernel.hpp"
#include "bosegas/neumann.hpp"

using namespace bosegas;

namespace {

std::shared_ptr<const ModifiedScattering> test_ms(double ell = 40.0,
                                                  double lambda = 0.15) {
    static auto sol =
        std::make_shared<ScatteringSolution>(RadialPotential::barrier(2.0, 1.0));
    return std::make_shared<ModifiedScattering>(sol, ell, lambda);
}

// light resolution for unit-level checks (the acceptance suite runs the
// production settings)
BoxQuadrature light_quadrature() { return {5, 3, 2, 2, 10, 10, 8, 5}; }

}  // namespace

TEST_SUITE_BEGIN("neumann");

TEST_CASE("mode function basics") {
    CHECK(mode_function({{0, 0, 0}}, {0.3, -0.2, 0.11}) == 1.0);
    CHECK(mode_function({{1, 0, 0}}, {0.0, 0.0, 0.0}) ==
          doctest::Approx(0.0).epsilon(1e-15));
    // value at a face: sqrt(2) cos(pi (x + 1/2)) at x = -1/2 is sqrt(2)
    CHECK(mode_function({{1, 0, 0}}, {-0.5, 0.1, 0.2}) == doctest::Approx(M_SQRT2));
    CHECK(NeumannMode{{1, 2, 2}}.energy() == doctest::Approx(9.0 * M_PI * M_PI));
}

TEST_CASE("modes are orthonormal under tensor quadrature") {
    ModeLattice lattice(3, true);
    auto bp = make_breakpoints(-0.5, 0.5, 2);
    Grid1D g = composite_grid(bp, 24);
    for (const auto& p : lattice.modes())
        for (const auto& q : lattice.modes()) {
            double prod = 1.0;
            for (int d = 0; d < 3; ++d) {
                double one_dim = 0.0;
                for (size_t i = 0; i < g.size(); ++i)
                    one_dim += g.w[i] * mode_factor(p.m[d], g.x[i]) *
                               mode_factor(q.m[d], g.x[i]);
                prod *= one_dim;
            }
            const double expect = (p.m == q.m) ? 1.0 : 0.0;
            CHECK(prod == doctest::Approx(expect).epsilon(1e-10));
        }
}

TEST_CASE("normal derivative vanishes on the faces") {
    NeumannMode mode{{2, 3, 1}};
    const double h = 1e-6;
    for (double face : {-0.5, 0.5}) {
        const Vec3 a{face, 0.13, -0.27};
        const Vec3 in{face - (face > 0 ? h : -h), 0.13, -0.27};
        const Vec3 in2{face - (face > 0 ? 2 * h : -2 * h), 0.13, -0.27};
        const double du = (3 * mode_function(mode, a) - 4 * mode_function(mode, in) +
                           mode_function(mode, in2)) /
                          (2 * h);
        CHECK(std::abs(du) < 1e-4);
    }
}

TEST_CASE("mirror map identities") {
    const Vec3 x0{0.3, 0.1, -0.2};
    const Vec3 id = mirror_point({0, 0, 0}, x0);
    CHECK(id[0] == doctest::Approx(x0[0]));
    CHECK(id[2] == doctest::Approx(x0[2]));
    Vec3 p = mirror_point({1, 0, 0}, {0.3, 0.1, 0.0});
    CHECK(p[0] == doctest::Approx(0.7));
    CHECK(p[1] == doctest::Approx(0.1));

    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> box(-0.5, 0.5);
    std::uniform_int_distribution<int> zdist(-1, 1);
    for (int trial = 0; trial < 1000; ++trial) {
        const Vec3 x{box(rng), box(rng), box(rng)};
        const Vec3 y{box(rng), box(rng), box(rng)};
        const Int3 z{zdist(rng), zdist(rng), zdist(rng)};
        const Vec3 px = mirror_point(z, x), py = mirror_point(z, y);
        auto dist = [](const Vec3& a, const Vec3& b) {
            return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
        };
        // the mirrored distance is conserved and never shrinks
        CHECK(dist(px, y) == doctest::Approx(dist(py, x)).epsilon(1e-13));
        CHECK(dist(px, y) >= dist(x, y) - 1e-12);
        // reflection-periodicity of the mode factors at mirror points
        for (int m : {1, 2, 3})
            for (int d = 0; d < 3; ++d)
                CHECK(mode_factor(m, px[d]) ==
                      doctest::Approx(mode_factor(m, x[d])).epsilon(1e-12));
    }
}

TEST_CASE("mode lattice enumeration") {
    ModeLattice with_zero(2, true);
    CHECK(with_zero.size() == 27);
    CHECK(with_zero[0].is_zero());
    ModeLattice without(2, false);
    CHECK(without.size() == 26);
    CHECK(with_zero[1].m == Int3{0, 0, 1});
}

TEST_CASE("kernel values: interior identity, support, symmetry") {
    auto ms = test_ms();
    SymmetrizedKernel kernel(50.0, ms);

    const Vec3 x{0.1, -0.05, 0.2}, y{0.12, 0.0, 0.17};
    CHECK(kernel.tilde_value(x, y) ==
          doctest::Approx(-50.0 * ms->omega_lambda(std::hypot(
                              x[0] - y[0], x[1] - y[1], x[2] - y[2])))
              .epsilon(1e-14));
    CHECK(kernel.tilde_value({-0.2, 0.0, 0.0}, {0.2, 0.0, 0.0}) == 0.0);
    CHECK(kernel.value({-0.2, 0.0, 0.0}, {0.2, 0.0, 0.0}) ==
          doctest::Approx(kernel.k2()));

    std::mt19937 rng(99);
    std::uniform_real_distribution<double> box(-0.5, 0.5);
    for (int trial = 0; trial < 200; ++trial) {
        const Vec3 a{box(rng), box(rng), box(rng)};
        const Vec3 b{box(rng), box(rng), box(rng)};
        CHECK(kernel.value(a, b) == doctest::Approx(kernel.value(b, a)).epsilon(1e-12));
    }
    // near the wall the mirror terms add negative mass
    const Vec3 xb{0.49, 0.0, 0.0}, yb{0.45, 0.02, 0.0};
    const double direct = -50.0 * ms->omega_lambda(std::hypot(
                              xb[0] - yb[0], xb[1] - yb[1], xb[2] - yb[2]));
    CHECK(kernel.tilde_value(xb, yb) < direct - 1e-6);
}

TEST_CASE("clipped ball integral against brute force") {
    auto ms = test_ms();
    const double S = ms->lambda();
    auto f = [&](double r) { return ms->omega_lambda(r); };
    const std::vector<double> rb{ms->solution().range() / ms->ell(), 0.5 * S};
    auto g = [](const Vec3& t) {
        return std::cos(2 * M_PI * t[0]) * std::cos(M_PI * t[1]) *
               std::cos(3 * M_PI * t[2]);
    };
    auto brute = [&](const Vec3& c, int N) {
        double lo[3], hi[3];
        for (int d = 0; d < 3; ++d) {
            lo[d] = std::max(c[d] - 0.5, -S);
            hi[d] = std::min(c[d] + 0.5, S);
        }
        double sum = 0.0;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                for (int k = 0; k < N; ++k) {
                    const Vec3 t{lo[0] + (hi[0] - lo[0]) * (i + 0.5) / N,
                                 lo[1] + (hi[1] - lo[1]) * (j + 0.5) / N,
                                 lo[2] + (hi[2] - lo[2]) * (k + 0.5) / N};
                    const double r2 = t[0] * t[0] + t[1] * t[1] + t[2] * t[2];
                    if (r2 >= S * S) continue;
                    sum += f(std::sqrt(r2)) * g(t);
                }
        return sum * (hi[0] - lo[0]) * (hi[1] - lo[1]) * (hi[2] - lo[2]) / N / N / N;
    };
    for (const Vec3& c : {Vec3{0.0, 0.0, 0.0}, Vec3{0.42, 0.0, 0.0},
                          Vec3{-0.44, 0.41, 0.0}, Vec3{0.44, -0.42, 0.46}}) {
        const double v = detail::clipped_ball_integral(c, S, f, rb, 12, 12, g);
        CHECK(v == doctest::Approx(brute(c, 260)).epsilon(3e-5));
    }
}

TEST_CASE("neumann coefficients are diagonal with the radial transform") {
    auto ms = test_ms();
    const double lam = ms->lambda();
    auto eps = [&](double r) { return ms->epsilon(r); };
    BoxQuadrature quad = light_quadrature();

    NeumannMode p{{1, 1, 0}};
    const double diag = neumann_coefficient(eps, lam, p, p, quad);
    CHECK(diag ==
          doctest::Approx(ms->epsilon_hat(std::sqrt(p.p_norm_sq()))).epsilon(1e-4));

    // equal parities, so the cancellation is carried by the quadrature
    const double off = neumann_coefficient(eps, lam, {{1, 1, 0}}, {{3, 1, 0}}, quad);
    CHECK(std::abs(off) < 2e-5);

    const double mass = neumann_coefficient(eps, lam, {{0, 0, 0}}, {{0, 0, 0}}, quad);
    CHECK(mass == doctest::Approx(ms->epsilon_hat(0.0)).epsilon(1e-5));
}

TEST_CASE("kernel mode matrix on a small lattice") {
    auto ms = test_ms(30.0, 0.18);
    SymmetrizedKernel kernel(200.0, ms);
    ModeLattice lattice(2, true);
    ModeMatrixResult mm =
        kernel_mode_matrix(kernel, lattice, light_quadrature(), false);
    CHECK(mm.max_offdiag < 5e-5);
    CHECK(mm.max_diag_rel_err < 5e-5);
    // symmetric up to the quadrature error of the light rule
    for (size_t i = 0; i < mm.size(); ++i)
        for (size_t j = i + 1; j < mm.size(); ++j)
            CHECK(std::abs(mm.at(i, j) - mm.at(j, i)) < 2e-5);
}

TEST_CASE("boundary function vanishes with n = 0 and is small inside") {
    RadialPotential V = RadialPotential::barrier(2.0, 1.0);
    auto ms = test_ms(40.0, 0.15);
    SymmetrizedKernel zero(0.0, ms);
    CHECK(boundary_function(zero, V, {0.0, 0.0, 0.0}) == doctest::Approx(0.0));
    CHECK(boundary_function(zero, V, {0.49, 0.2, 0.0}) == doctest::Approx(0.0));

    const double n = 100.0;
    SymmetrizedKernel kernel(n, ms);
    const double ell = ms->ell();
    const double h0 = boundary_function(kernel, V, {0.0, 0.0, 0.0});
    CHECK(std::abs(h0) < 20.0 * n / (ell * ell));
    const double hw = boundary_function(kernel, V, {0.495, 0.0, 0.0});
    CHECK(std::abs(hw) > std::abs(h0));
}

TEST_CASE("boundary norm scales like (n/ell) log(ell)/ell") {
    RadialPotential V = RadialPotential::barrier(2.0, 1.0);
    const double n_over_ell = 2.0;
    std::vector<double> ells{20.0, 40.0, 80.0};
    std::vector<double> scaled;  // ||h||_1 * ell^2 / n against log(ell)
    for (double ell : ells) {
        auto ms = test_ms(ell, 0.2);
        SymmetrizedKernel kernel(n_over_ell * ell, ms);
        BoundaryNorms norms = boundary_h_norms(kernel, V, 3, 2);
        scaled.push_back(norms.l1 * ell * ell / (n_over_ell * ell));
    }
    std::vector<double> logs;
    for (double ell : ells) logs.push_back(std::log(ell));
    LinearFit fit = linear_fit(logs, scaled);
    CHECK(fit.slope > 0.5);
    CHECK(fit.slope < 50.0);
    for (size_t i = 0; i < ells.size(); ++i) {
        const double ratio = scaled[i] / std::log(ells[i]);
        CHECK(ratio > 0.05);
        CHECK(ratio < 100.0);
    }
}

TEST_SUITE_END();
