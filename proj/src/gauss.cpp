#include "bosegas/gauss.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace bosegas {

namespace {

GaussRule compute_rule(int n) {
    if (n < 1) throw std::invalid_argument("gauss_rule: order must be >= 1");
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // Roots of P_n by Newton iteration from the Chebyshev-like initial guess.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

std::mutex rule_mutex;
std::map<int, GaussRule> rule_cache;

}  // namespace

const GaussRule& gauss_rule(int order) {
    std::lock_guard<std::mutex> lock(rule_mutex);
    auto it = rule_cache.find(order);
    if (it == rule_cache.end()) it = rule_cache.emplace(order, compute_rule(order)).first;
    return it->second;
}

double gauss_panel(const std::function<double(double)>& f, double a, double b,
                   int order) {
    const GaussRule& rule = gauss_rule(order);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < order; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

double gauss_panels(const std::function<double(double)>& f,
                    std::span<const double> breakpoints, int order) {
    double total = 0.0;
    for (size_t i = 0; i + 1 < breakpoints.size(); ++i)
        total += gauss_panel(f, breakpoints[i], breakpoints[i + 1], order);
    return total;
}

namespace {

double adaptive_rec(const std::function<double(double)>& f, double a, double b,
                    double coarse, double abs_tol, double rel_tol, int depth,
                    int order) {
    double fine = gauss_panel(f, a, b, 2 * order);
    double err = std::abs(fine - coarse);
    if (depth <= 0 || err <= abs_tol + rel_tol * std::abs(fine)) return fine;
    double mid = 0.5 * (a + b);
    double left = gauss_panel(f, a, mid, order);
    double right = gauss_panel(f, mid, b, order);
    return adaptive_rec(f, a, mid, left, 0.5 * abs_tol, rel_tol, depth - 1, order) +
           adaptive_rec(f, mid, b, right, 0.5 * abs_tol, rel_tol, depth - 1, order);
}

}  // namespace

double adaptive_gauss(const std::function<double(double)>& f, double a, double b,
                      double abs_tol, double rel_tol, int max_depth, int order) {
    if (a == b) return 0.0;
    double coarse = gauss_panel(f, a, b, order);
    return adaptive_rec(f, a, b, coarse, abs_tol, rel_tol, max_depth, order);
}

std::vector<double> make_breakpoints(double a, double b, int n_panels,
                                     std::span<const double> extra) {
    std::vector<double> pts;
    pts.reserve(n_panels + 1 + extra.size());
    for (int i = 0; i <= n_panels; ++i) pts.push_back(a + (b - a) * i / n_panels);
    for (double x : extra)
        if (x > a && x < b) pts.push_back(x);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](double u, double v) { return std::abs(u - v) < 1e-15; }),
              pts.end());
    return pts;
}

Grid1D composite_grid(std::span<const double> breakpoints, int order) {
    const GaussRule& rule = gauss_rule(order);
    Grid1D grid;
    for (size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double mid = 0.5 * (breakpoints[i] + breakpoints[i + 1]);
        const double half = 0.5 * (breakpoints[i + 1] - breakpoints[i]);
        for (int k = 0; k < order; ++k) {
            grid.x.push_back(mid + half * rule.nodes[k]);
            grid.w.push_back(half * rule.weights[k]);
        }
    }
    return grid;
}

double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        double x2 = x * x;
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
    }
    return std::sin(x) / x;
}

}  // namespace bosegas
