#include "bosegas/modified_scattering.hpp"

#include <cmath>
#include <stdexcept>

#include "bosegas/gauss.hpp"

namespace bosegas {

ModifiedScattering::ModifiedScattering(
    std::shared_ptr<const ScatteringSolution> solution, double ell, double lambda)
    : solution_(std::move(solution)), ell_(ell), lambda_(lambda) {
    if (!solution_) throw std::invalid_argument("ModifiedScattering: null solution");
    const double R = solution_->range();
    if (!(2.0 * R / ell_ < lambda_ && lambda_ < 0.25))
        throw std::invalid_argument(
            "ModifiedScattering: need 2R/ell < lambda < 1/4 (got 2R/ell = " +
            std::to_string(2.0 * R / ell_) + ", lambda = " + std::to_string(lambda_) + ")");
    support_break_ = R / ell_;
}

ModifiedScattering::ModifiedScattering(const RadialPotential& V, double ell,
                                       double lambda)
    : ModifiedScattering(std::make_shared<ScatteringSolution>(V), ell, lambda) {}

double ModifiedScattering::epsilon(double r) const {
    if (r < 0.0) throw std::invalid_argument("epsilon: r must be >= 0");
    const double s = r / lambda_;
    if (s <= 0.5 || s >= 1.0) return 0.0;
    return 2.0 * a() / ell_ / (lambda_ * lambda_ * lambda_) * profile_.d2(s) / s;
}

double ModifiedScattering::omega_lambda(double r) const {
    if (r >= lambda_) return 0.0;
    const double chi = profile_.value(r / lambda_);
    if (chi == 0.0) return 0.0;
    const double om = r < support_break_ ? solution_->omega(ell_ * r) : a() / (ell_ * r);
    return om * chi;
}

namespace {

// Radial FT with panels sized to resolve sin(p r) on [a, b].
double radial_ft(const std::function<double(double)>& f, double a, double b,
                 double p, std::span<const double> extra) {
    int n = 8 + static_cast<int>(std::ceil((b - a) * std::abs(p) / M_PI));
    auto bp = make_breakpoints(a, b, n, extra);
    return 4.0 * M_PI *
           gauss_panels([&](double r) { return f(r) * r * r * sinc(p * r); }, bp, 12);
}

}  // namespace

double ModifiedScattering::epsilon_hat(double p) const {
    if (p < 0.0) throw std::invalid_argument("epsilon_hat: p must be >= 0");
    // eps_hat(p) = (8 pi a / ell) * int_{1/2}^1 chi''(s) s sinc(lambda p s) ds.
    // chi'' is cubic on [1/2, 1]; above a = lambda*p = 10 the oscillatory
    // integral is evaluated by its antiderivative instead of quadrature.
    const double a = lambda_ * p;
    const double front = 8.0 * M_PI * this->a() / ell_;
    if (a < 10.0) {
        return front * gauss_panel(
                           [&](double s) { return profile_.d2(s) * s * sinc(a * s); },
                           0.5, 1.0, 24);
    }
    // W(a) = int chi'' sin(a s) ds from the antiderivative; chi'' vanishes at
    // both join points, so only derivative boundary terms survive.
    const double sa = std::sin(a), sha = std::sin(0.5 * a);
    const double ca = std::cos(a), cha = std::cos(0.5 * a);
    const double a2 = a * a, a3 = a2 * a, a4 = a3 * a;
    const double W = -480.0 * (sa - sha) / a2 - 5760.0 * (ca + cha) / a3 +
                     23040.0 * (sa - sha) / a4;
    return front * W / a;
}

double ModifiedScattering::omega_hat(double p) const {
    if (p < 0.0) throw std::invalid_argument("omega_hat: p must be >= 0");
    const double extra[] = {support_break_, 0.5 * lambda_};
    return radial_ft([this](double r) { return omega_lambda(r); }, 0.0, lambda_, p,
                     extra);
}

double ModifiedScattering::cached(Table& table, double p, bool is_epsilon) const {
    std::lock_guard<std::mutex> lock(table_mutex_);
    if (table.dp == 0.0) table.dp = std::min(0.02 / lambda_, 0.5);
    size_t need = static_cast<size_t>(p / table.dp) + 4;
    if (table.values.size() < need) {
        size_t grow = std::max<size_t>(need + need / 2, 256);
        size_t old = table.values.size();
        table.values.resize(grow);
        for (size_t i = old; i < grow; ++i)
            table.values[i] = is_epsilon ? epsilon_hat(i * table.dp)
                                         : omega_hat(i * table.dp);
    }
    // 4-point Lagrange interpolation on the uniform grid.
    size_t i1 = static_cast<size_t>(p / table.dp);
    size_t i0 = i1 > 0 ? i1 - 1 : 0;
    const double t = p / table.dp - i0;
    const double* v = &table.values[i0];
    const double c0 = -(t - 1) * (t - 2) * (t - 3) / 6.0;
    const double c1 = t * (t - 2) * (t - 3) / 2.0;
    const double c2 = -t * (t - 1) * (t - 3) / 2.0;
    const double c3 = t * (t - 1) * (t - 2) / 6.0;
    return c0 * v[0] + c1 * v[1] + c2 * v[2] + c3 * v[3];
}

double ModifiedScattering::epsilon_hat_cached(double p) const {
    return cached(eps_table_, p, true);
}

double ModifiedScattering::omega_hat_cached(double p) const {
    return cached(omega_table_, p, false);
}

}  // namespace bosegas
