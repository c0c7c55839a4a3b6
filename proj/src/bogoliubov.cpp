#include "bosegas/bogoliubov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bosegas/gauss.hpp"
#include "bosegas/parallel.hpp"
#include "bosegas/radial_lattice.hpp"

namespace bosegas {

namespace {

constexpr double kUnderflowExponent = 746.0;  // exp(-x) == 0 in double beyond

// Stable evaluation of the ground-energy summand
//   bracket(p) = sqrt(p^4 + c p^2) - p^2 - c/2 + (c/2)^2 / (2 p^2),
// written without cancellation; decays like c^3/(16 p^4).
double ground_bracket(double p2, double c) {
    const double D = std::sqrt(p2 * p2 + c * p2);
    const double num = c / (std::sqrt(1.0 + c / p2) + 1.0) + 0.5 * c;
    return 0.25 * c * c * num / (2.0 * p2 * (D + p2 + 0.5 * c));
}

// Euler-Maclaurin tail of a radial octant lattice sum beyond radius p0:
//   sum_{|m| > M} f(pi |m|) ~ I2/(2 pi^2) + 3 I1/(4 pi) + 3 I0 / 4,
// with I_k = int_{p0}^inf f(r) r^k dr (octant bulk + faces + edges).
struct TailCorrection {
    double value = 0.0;
    double estimate = 0.0;
};

TailCorrection octant_tail(const std::function<double(double)>& f, double p0,
                           double r_big) {
    auto ik = [&](int k) {
        return adaptive_gauss(
            [&](double r) { return f(r) * std::pow(r, k); }, p0, r_big, 1e-14, 1e-10);
    };
    const double i2 = ik(2), i1 = ik(1), i0 = ik(0);
    TailCorrection tail;
    tail.value = i2 / (2.0 * M_PI * M_PI) + 3.0 * i1 / (4.0 * M_PI) + 0.75 * i0;
    // Next Euler-Maclaurin order: edge/vertex remainder, dominated by I0.
    tail.estimate = 0.5 * std::abs(i0) + std::abs(f(p0)) + 1e-300;
    return tail;
}

}  // namespace

BogParams::BogParams(std::shared_ptr<const ModifiedScattering> ms, double n, double T)
    : ms_(std::move(ms)), n_(n), T_(T) {
    if (!ms_) throw std::invalid_argument("BogParams: null scattering data");
    if (n_ < 0.0) throw std::invalid_argument("BogParams: n must be >= 0");
    if (T_ < 0.0) throw std::invalid_argument("BogParams: T must be >= 0");
    const double ratio = n_ / ms_->ell();
    if (ms_->lambda() * ratio * ratio > 1.0)
        throw std::invalid_argument("BogParams: lambda (n/ell)^2 must be <= 1, got " +
                                    std::to_string(ms_->lambda() * ratio * ratio));
    density_ratio_ = n_ * ms_->a() / ms_->ell();
}

double BogParams::mean_field() const {
    return 8.0 * M_PI * a() * n_ / ell();
}

double BogParams::coeff_A(double p) const { return p * p + mean_field(); }

double BogParams::coeff_B(double p) const {
    if (n_ == 0.0) return 0.0;
    return n_ * ms_->epsilon_hat_cached(p);
}

double BogParams::e_approx(double p) const {
    const double p2 = p * p;
    return std::sqrt(p2 * p2 + c2() * p2);
}

Rotation rotation(double A, double B) {
    if (A <= std::abs(B))
        throw std::invalid_argument("rotation: need A > |B|, got A = " +
                                    std::to_string(A) + ", B = " + std::to_string(B));
    Rotation rot;
    rot.e = std::sqrt(A * A - B * B);
    rot.nu = -std::sqrt(0.5 * (A / rot.e - 1.0));
    rot.phi = std::asinh(rot.nu);
    return rot;
}

DispersionTable::DispersionTable(const BogParams& params, const ModeLattice& lattice) {
    rows_.reserve(lattice.size());
    for (const NeumannMode& mode : lattice.modes()) {
        if (mode.is_zero()) continue;
        DispersionRow row;
        row.mode = mode;
        row.p = std::sqrt(mode.p_norm_sq());
        row.A = params.coeff_A(row.p);
        row.B = params.coeff_B(row.p);
        if (row.A <= std::abs(row.B))
            throw std::runtime_error(
                "DispersionTable: degenerate mode (" + std::to_string(mode.m[0]) + "," +
                std::to_string(mode.m[1]) + "," + std::to_string(mode.m[2]) +
                "): A = " + std::to_string(row.A) + " <= |B| = " +
                std::to_string(std::abs(row.B)));
        Rotation rot = rotation(row.A, row.B);
        row.nu = rot.nu;
        row.phi = rot.phi;
        row.e = rot.e;
        row.e_approx = params.e_approx(row.p);
        rows_.push_back(row);
    }
}

double DispersionTable::max_deviation() const {
    double dev = 0.0;
    for (const auto& row : rows_) dev = std::max(dev, std::abs(row.e - row.e_approx));
    return dev;
}

double dispersion_deviation(const BogParams& params, std::span<const double> p_grid) {
    double dev = 0.0;
    for (double p : p_grid) {
        if (p == 0.0) continue;
        Rotation rot = rotation(params.coeff_A(p), params.coeff_B(p));
        dev = std::max(dev, std::abs(rot.e - params.e_approx(p)));
    }
    return dev;
}

GroundEnergy ground_energy(const BogParams& params, int m_cutoff) {
    GroundEnergy out;
    const double c = params.c2();
    const double leading = 4.0 * M_PI * params.a() * params.n() * params.n() / params.ell();
    if (params.n() == 0.0 || c == 0.0) {
        out.value = out.lattice_sum = leading;
        return out;
    }
    if (m_cutoff < 4)
        throw std::invalid_argument("ground_energy: cutoff too small; need m_cutoff >= 4");
    // Tail scale check: summand ~ c^3/(16 p^4); require the dropped part to be
    // resolvable against the sum itself.
    const double p0 = M_PI * m_cutoff;
    const int64_t s_limit = static_cast<int64_t>(m_cutoff) * m_cutoff;
    const RadialLattice& lattice = RadialLattice::shared(s_limit);
    const double half_sum =
        0.5 * lattice.sum_radial([&](double p) { return ground_bracket(p * p, c); },
                                 s_limit);
    auto radial = [&](double r) { return 0.5 * ground_bracket(r * r, c); };
    TailCorrection tail = octant_tail(radial, p0, 60.0 * std::sqrt(c) + 8.0 * p0);
    out.lattice_sum = leading + half_sum;
    out.tail = tail.value;
    out.tail_estimate = tail.estimate;
    out.value = out.lattice_sum + out.tail;
    return out;
}

double lhy_coefficient() { return 128.0 / (15.0 * std::sqrt(M_PI)); }

double lhy_residual(double x, int m_cutoff) {
    if (x <= 0.0) throw std::invalid_argument("lhy_residual: x must be > 0");
    const double c = 16.0 * M_PI * x;
    if (m_cutoff <= 0)
        m_cutoff = std::max(48, static_cast<int>(6.0 * std::sqrt(c) / M_PI) + 1);
    const int64_t s_limit = static_cast<int64_t>(m_cutoff) * m_cutoff;
    const RadialLattice& lattice = RadialLattice::shared(s_limit);
    const double half_sum =
        0.5 * lattice.sum_radial([&](double p) { return ground_bracket(p * p, c); },
                                 s_limit);
    auto radial = [&](double r) { return 0.5 * ground_bracket(r * r, c); };
    TailCorrection tail = octant_tail(radial, M_PI * m_cutoff,
                                      60.0 * std::sqrt(c) + 8.0 * M_PI * m_cutoff);
    return half_sum + tail.value - 4.0 * M_PI * lhy_coefficient() * std::pow(x, 2.5);
}

double lhy_g_half_space_integral() {
    // g(r) r^2 = 32 - 64 r^2 / (sqrt(r^4 + 16 r^2) + r^2 + 8), exact rewrite
    // that avoids the large-r cancellation; series tail beyond r0.
    const double r0 = 200.0;
    auto integrand = [](double r) {
        if (r == 0.0) return 32.0;
        const double r2 = r * r;
        return 32.0 - 64.0 * r2 / (std::sqrt(r2 * r2 + 16.0 * r2) + r2 + 8.0);
    };
    double body = adaptive_gauss(integrand, 0.0, r0, 1e-11, 1e-13);
    double tail = 256.0 / r0 - 2560.0 / (3.0 * r0 * r0 * r0) +
                  28672.0 / (5.0 * std::pow(r0, 5)) - 344064.0 / (7.0 * std::pow(r0, 7));
    return 0.25 * M_PI * (body + tail);
}

ThermalSum thermal_free_energy(const BogParams& params) {
    ThermalSum out;
    if (params.T() == 0.0) return out;
    const double beta = 1.0 / (params.T() * params.ell() * params.ell());
    const double c = params.c2();
    // Underflow radius: exponent sqrt(p^4 + c p^2) * beta >= beta p^2.
    const int64_t s_limit =
        static_cast<int64_t>(kUnderflowExponent / (beta * M_PI * M_PI)) + 1;
    if (s_limit > (int64_t(1) << 24))
        throw std::invalid_argument(
            "thermal_free_energy: T ell^2 too large for the lattice sum (need |m|^2 <= " +
            std::to_string(s_limit) + ")");
    const RadialLattice& lattice = RadialLattice::shared(s_limit);
    int64_t terms = 0;
    double sum = lattice.sum_radial(
        [&](double p) {
            const double p2 = p * p;
            const double expo = beta * std::sqrt(p2 * p2 + c * p2);
            if (expo > kUnderflowExponent) return 0.0;
            ++terms;
            return std::log1p(-std::exp(-expo));
        },
        s_limit);
    out.value = params.T() * sum;
    out.terms = terms;
    out.tail_estimate = 1e-300;  // dropped summands underflow to exact zeros
    return out;
}

BoxFreeEnergy f_bog(const BogParams& params, int m_cutoff) {
    BoxFreeEnergy out;
    const double ell = params.ell();
    const double leading = 4.0 * M_PI * params.a() / (ell * ell * ell) * params.n() * params.n();
    out.ground = leading * (1.0 + lhy_coefficient() *
                                      std::sqrt(params.n()) *
                                      std::pow(params.a() / ell, 1.5));
    if (m_cutoff <= 0)
        m_cutoff = std::max(24, static_cast<int>(4.0 * std::sqrt(params.c2()) / M_PI) + 8);
    GroundEnergy ground = ground_energy(params, m_cutoff);
    out.ground_lattice = ground.value / (ell * ell);
    out.lattice_tail_estimate = ground.tail_estimate / (ell * ell);
    ThermalSum thermal = thermal_free_energy(params);
    out.thermal = thermal.value;
    out.thermal_tail_estimate = thermal.tail_estimate;
    out.total = out.ground + out.thermal;
    return out;
}

EBogDeviation e_bog_deviation(const BogParams& params, int m_cutoff) {
    EBogDeviation out;
    const double c = params.c2();
    if (params.n() == 0.0 || c == 0.0) return out;
    if (m_cutoff < 4)
        throw std::invalid_argument("e_bog_deviation: need m_cutoff >= 4");
    const int64_t s_limit = static_cast<int64_t>(m_cutoff) * m_cutoff;
    const RadialLattice& lattice = RadialLattice::shared(s_limit);

    // Difference of diagonalization constants per mode, cancellation-free:
    //   d(p) = ((c/2)^2 - B^2) * (2p^2 - E1 - E2) / (2 p^2 (E1 + E2)),
    // E1 = sqrt(A^2 - B^2), E2 = sqrt(p^4 + c p^2).
    auto diff = [&](double p) {
        const double p2 = p * p;
        const double A = p2 + 0.5 * c;
        const double B = params.coeff_B(p);
        const double E2 = std::sqrt(p2 * p2 + c * p2);
        const double E1 = std::sqrt(A * A - B * B);
        const double num = 0.25 * c * c - B * B;
        return 0.5 * num * (2.0 * p2 - E1 - E2) / (2.0 * p2 * (E1 + E2));
    };
    double dev = lattice.sum_radial(diff, s_limit);
    // Tail with B dropped: eps_hat decays there, and the closed-form bracket
    // difference at B = 0 carries the whole -c^3/(16 p^4) decay.
    auto radial = [&](double r) {
        const double p2 = r * r;
        const double A = p2 + 0.5 * c;
        const double E2 = std::sqrt(p2 * p2 + c * p2);
        return 0.5 * 0.25 * c * c * (2.0 * p2 - A - E2) / (2.0 * p2 * (A + E2));
    };
    TailCorrection tail = octant_tail(radial, M_PI * m_cutoff,
                                      60.0 * std::sqrt(c) + 8.0 * M_PI * m_cutoff);
    out.deviation = std::abs(dev + tail.value);

    GroundEnergy bracket = ground_energy(params, m_cutoff);
    out.approx = bracket.value -
                 4.0 * M_PI * params.a() * params.n() * params.n() / params.ell();
    out.exact = out.approx + dev + tail.value;
    return out;
}

double riemann_lattice_side(double hbar, double q) {
    if (hbar <= 0.0) throw std::invalid_argument("riemann_gap: hbar must be > 0");
    const int64_t s_limit = static_cast<int64_t>(
                                kUnderflowExponent / (hbar * hbar * M_PI * M_PI)) +
                            1;
    if (s_limit > (int64_t(1) << 24))
        throw std::invalid_argument("riemann_gap: hbar too small for the lattice sum");
    const RadialLattice& lattice = RadialLattice::shared(s_limit);
    double sum = lattice.sum_radial(
        [&](double p) {
            const double hp2 = hbar * hbar * p * p;
            const double expo = std::sqrt(hp2 * hp2 + q * hp2);
            if (expo > kUnderflowExponent) return 0.0;
            return std::log1p(-std::exp(-expo));
        },
        s_limit);
    return hbar * hbar * hbar * sum;
}

double riemann_integral_side(double q) {
    const double r_big = std::sqrt(kUnderflowExponent) + std::sqrt(q) + 2.0;
    double radial = adaptive_gauss(
        [&](double r) {
            if (r == 0.0) return 0.0;
            const double r2 = r * r;
            const double expo = std::sqrt(r2 * r2 + q * r2);
            if (expo > kUnderflowExponent) return 0.0;
            return std::log1p(-std::exp(-expo)) * r2;
        },
        0.0, r_big, 1e-13, 1e-12);
    return radial / (2.0 * M_PI * M_PI);
}

double riemann_gap(double hbar, double q) {
    return std::abs(riemann_lattice_side(hbar, q) - riemann_integral_side(q));
}

}  // namespace bosegas
