#pragma once

#include <functional>
#include <span>
#include <vector>

namespace bosegas {

// Gauss-Legendre rule on [-1, 1]. Nodes/weights are computed once per order
// by Newton iteration on the Legendre polynomial and cached.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussRule& gauss_rule(int order);

// Integral of f over [a, b] with a single Gauss-Legendre rule.
double gauss_panel(const std::function<double(double)>& f, double a, double b,
                   int order = 16);

// Composite rule over consecutive panels given by breakpoints.
double gauss_panels(const std::function<double(double)>& f,
                    std::span<const double> breakpoints, int order = 16);

// Adaptive bisection driven by the difference between orders n and 2n.
// Absolute/relative tolerance mix: |err| <= abs_tol + rel_tol * |I|.
double adaptive_gauss(const std::function<double(double)>& f, double a, double b,
                      double abs_tol = 1e-12, double rel_tol = 1e-12,
                      int max_depth = 32, int order = 10);

// Panel list helper: [a, b] split into n equal panels, with optional extra
// breakpoints (clipped to the interval, deduplicated, sorted).
std::vector<double> make_breakpoints(double a, double b, int n_panels,
                                     std::span<const double> extra = {});

// Flattened nodes/weights of a composite Gauss rule, for tensor quadrature.
struct Grid1D {
    std::vector<double> x;
    std::vector<double> w;
    size_t size() const { return x.size(); }
};

Grid1D composite_grid(std::span<const double> breakpoints, int order);

// sin(x)/x with a series branch near zero.
double sinc(double x);

}  // namespace bosegas
