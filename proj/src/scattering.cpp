#include "bosegas/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bosegas/fit.hpp"
#include "bosegas/gauss.hpp"

namespace bosegas {

namespace {

struct Trace {
    std::vector<double> r, g, gp;
};

// Classical RK4 on g'' = (1/2) V g, g(0) = 0, g'(0) = 1, with steps that
// never straddle a breakpoint of V.
Trace integrate(const RadialPotential& V, double r_max, double h) {
    std::vector<double> edges{0.0};
    for (double b : V.breakpoints())
        if (b > 0.0 && b < r_max) edges.push_back(b);
    edges.push_back(r_max);
    std::sort(edges.begin(), edges.end());

    Trace tr;
    tr.r.push_back(0.0);
    tr.g.push_back(0.0);
    tr.gp.push_back(1.0);
    double g = 0.0, gp = 1.0;
    for (size_t e = 0; e + 1 < edges.size(); ++e) {
        const double a = edges[e], b = edges[e + 1];
        int n = std::max(2, static_cast<int>(std::ceil((b - a) / h)));
        if (n % 2) ++n;  // even count keeps Simpson applicable on the grid
        const double dt = (b - a) / n;
        // Stage evaluations at the panel edges must see this panel's branch
        // of V, so nudge them off the breakpoint.
        const double nudge = 1e-12 * (b - a);
        auto f = [&](double rr, double gg) {
            return 0.5 * V(std::clamp(rr, a + nudge, b - nudge)) * gg;
        };
        for (int i = 0; i < n; ++i) {
            const double r = a + i * dt;
            const double k1g = gp, k1p = f(r, g);
            const double k2g = gp + 0.5 * dt * k1p, k2p = f(r + 0.5 * dt, g + 0.5 * dt * k1g);
            const double k3g = gp + 0.5 * dt * k2p, k3p = f(r + 0.5 * dt, g + 0.5 * dt * k2g);
            const double k4g = gp + dt * k3p, k4p = f(r + dt, g + dt * k3g);
            g += dt / 6.0 * (k1g + 2.0 * k2g + 2.0 * k3g + k4g);
            gp += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
            tr.r.push_back(a + (i + 1) * dt);
            tr.g.push_back(g);
            tr.gp.push_back(gp);
        }
    }
    return tr;
}

// Exterior linear fit g ~ alpha*r + beta over [range + delta, r_max].
LinearFit exterior_fit(const Trace& tr, double range, double r_max) {
    const double delta = 0.05 * (r_max - range);
    std::vector<double> xs, ys;
    for (size_t i = 0; i < tr.r.size(); ++i) {
        if (tr.r[i] >= range + delta) {
            xs.push_back(tr.r[i]);
            ys.push_back(tr.g[i]);
        }
    }
    if (xs.size() < 4)
        throw std::runtime_error("scattering solve: exterior window has too few points");
    return linear_fit(xs, ys);
}

}  // namespace

ScatteringSolution::ScatteringSolution(const RadialPotential& V, const GridSpec& spec) {
    range_ = V.range();
    const double r_max = spec.max_radius > 0.0 ? spec.max_radius : 3.0 * range_;
    if (r_max <= range_)
        throw std::invalid_argument("scattering solve: max radius must exceed the range of V");
    double h = spec.step > 0.0 ? spec.step : range_ / 256.0;

    if (V.is_zero()) {
        // g = r exactly.
        Trace tr = integrate(V, r_max, h);
        grid_ = tr.r;
        g_ = tr.g;
        gp_ = tr.gp;
        a_ = 0.0;
        slope_alpha_ = 1.0;
        residual_ = 0.0;
        return;
    }

    double a_prev = 0.0;
    bool have_prev = false;
    for (int ref = 0;; ++ref) {
        Trace tr = integrate(V, r_max, h);
        LinearFit fit = exterior_fit(tr, range_, r_max);
        const double alpha = fit.slope;
        if (alpha <= 0.0)
            throw std::runtime_error("scattering solve: degenerate exterior slope");
        const double a = -fit.intercept / alpha;
        if (have_prev && std::abs(a - a_prev) < spec.a_tol) {
            slope_alpha_ = alpha;
            a_ = a;
            grid_ = std::move(tr.r);
            g_ = std::move(tr.g);
            gp_ = std::move(tr.gp);
            for (double& v : g_) v /= alpha;
            for (double& v : gp_) v /= alpha;
            residual_ = 0.0;
            for (size_t i = 0; i < grid_.size(); ++i)
                if (grid_[i] > range_)
                    residual_ = std::max(residual_, std::abs(g_[i] - (grid_[i] - a_)));
            return;
        }
        if (ref >= spec.max_refinements) {
            throw std::runtime_error(
                "scattering solve: step refinement did not converge; last |da| = " +
                std::to_string(std::abs(a - a_prev)));
        }
        a_prev = a;
        have_prev = true;
        h *= 0.5;
    }
}

double ScatteringSolution::g(double r) const {
    if (r < 0.0) throw std::invalid_argument("g(r): r must be >= 0");
    if (r >= grid_.back()) return r - a_;
    auto it = std::upper_bound(grid_.begin(), grid_.end(), r);
    size_t hi = std::min<size_t>(it - grid_.begin(), grid_.size() - 1);
    size_t lo = hi - 1;
    const double h = grid_[hi] - grid_[lo];
    const double t = (r - grid_[lo]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * g_[lo] + (t3 - 2 * t2 + t) * h * gp_[lo] +
           (-2 * t3 + 3 * t2) * g_[hi] + (t3 - t2) * h * gp_[hi];
}

double ScatteringSolution::g_prime(double r) const {
    if (r >= grid_.back()) return 1.0;
    auto it = std::upper_bound(grid_.begin(), grid_.end(), r);
    size_t hi = std::min<size_t>(it - grid_.begin(), grid_.size() - 1);
    size_t lo = hi - 1;
    const double h = grid_[hi] - grid_[lo];
    const double t = (r - grid_[lo]) / h;
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * g_[lo] / h + (3 * t2 - 4 * t + 1) * gp_[lo] +
            (-6 * t2 + 6 * t) * g_[hi] / h + (3 * t2 - 2 * t) * gp_[hi]);
}

double ScatteringSolution::omega(double r) const {
    if (r <= 0.0) return 1.0 - gp_.front();
    if (r >= grid_.back()) return a_ / r;
    return 1.0 - g(r) / r;
}

double ScatteringSolution::quadrature_scattering_length(const RadialPotential& V) const {
    // 8*pi*a = int V (1 - omega) = 4*pi * int_0^R V(r) g(r) r dr.
    auto bp = make_breakpoints(0.0, range_, 8, V.breakpoints());
    double integral = gauss_panels(
        [&](double r) { return V(r) * g(r) * r; }, bp, 16);
    return 0.5 * integral;
}

double scattering_length(const RadialPotential& V) {
    return ScatteringSolution(V).scattering_length();
}

}  // namespace bosegas
