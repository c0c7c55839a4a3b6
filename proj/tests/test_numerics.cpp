#include <doctest.h>

#include <cmath>

#include "bosegas/fit.hpp"
#include "bosegas/gauss.hpp"
#include "bosegas/parallel.hpp"
#include "bosegas/radial_lattice.hpp"

using namespace bosegas;

TEST_SUITE_BEGIN("numerics");

TEST_CASE("gauss rule integrates polynomials exactly") {
    // degree 2n-1 exactness
    auto f = [](double x) { return 5 * x * x * x * x * x * x * x - 2 * x * x + 1; };
    const double exact = 2.0 / 3.0 * (-2.0) + 2.0;  // odd part drops on [-1, 1]
    CHECK(gauss_panel(f, -1.0, 1.0, 4) == doctest::Approx(exact).epsilon(1e-14));
}

TEST_CASE("adaptive gauss handles mild endpoint singularities") {
    // int_0^1 log(x) x^2 dx = -1/9
    const double value =
        adaptive_gauss([](double x) { return x > 0 ? std::log(x) * x * x : 0.0; }, 0.0,
                       1.0, 1e-13, 1e-13);
    CHECK(value == doctest::Approx(-1.0 / 9.0).epsilon(1e-10));
}

TEST_CASE("composite grid covers breakpoints") {
    auto bp = make_breakpoints(0.0, 1.0, 4, std::array<double, 2>{0.31, 1.7});
    Grid1D g = composite_grid(bp, 6);
    CHECK(g.size() == 5 * 6);  // 4 equal panels plus the one split at 0.31
    double sum = 0.0;
    for (size_t i = 0; i < g.size(); ++i) sum += g.w[i];
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("loglog fit recovers a power law") {
    std::vector<double> x{0.1, 0.2, 0.4, 0.8}, y;
    for (double v : x) y.push_back(3.0 * std::pow(v, 2.5));
    LinearFit fit = loglog_fit(x, y);
    CHECK(fit.slope == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(std::exp(fit.intercept) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("radial lattice multiplicities against direct enumeration") {
    const int M = 12;
    const RadialLattice lattice(M * M);
    // brute-force octant count
    std::vector<int> counts(M * M + 1, 0);
    for (int i = 0; i <= M; ++i)
        for (int j = 0; j <= M; ++j)
            for (int k = 0; k <= M; ++k) {
                const int s = i * i + j * j + k * k;
                if (s >= 1 && s <= M * M) counts[s]++;
            }
    for (int s = 1; s <= M * M; ++s) CHECK(lattice.count(s) == counts[s]);

    // sum of a radial function matches the triple loop
    double direct = 0.0;
    for (int i = 0; i <= M; ++i)
        for (int j = 0; j <= M; ++j)
            for (int k = 0; k <= M; ++k) {
                const int s = i * i + j * j + k * k;
                if (s >= 1 && s <= M * M)
                    direct += std::exp(-0.1 * M_PI * M_PI * s);
            }
    const double via_table = lattice.sum_radial(
        [](double p) { return std::exp(-0.1 * p * p); }, M * M);
    CHECK(via_table == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("parallel reduce is deterministic and correct") {
    auto block_sum = [](int64_t lo, int64_t hi) {
        double s = 0.0;
        for (int64_t i = lo; i < hi; ++i) s += 1.0 / (1.0 + i);
        return s;
    };
    const double a = parallel_reduce(100000, 1024, block_sum);
    const double b = parallel_reduce(100000, 1024, block_sum);
    CHECK(a == b);
    double serial = 0.0;
    for (int64_t i = 0; i < 100000; ++i) serial += 1.0 / (1.0 + i);
    CHECK(a == doctest::Approx(serial).epsilon(1e-12));
}

TEST_SUITE_END();
