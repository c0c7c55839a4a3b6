#include "bosegas/fit.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace bosegas {

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("linear_fit: need >= 2 matching points");
    const size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double det = n * sxx - sx * sx;
    if (det == 0.0) throw std::invalid_argument("linear_fit: degenerate abscissae");
    LinearFit fit;
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / n;
    for (size_t i = 0; i < n; ++i) {
        double r = std::abs(y[i] - (fit.slope * x[i] + fit.intercept));
        fit.max_residual = std::max(fit.max_residual, r);
    }
    return fit;
}

LinearFit loglog_fit(std::span<const double> x, std::span<const double> y) {
    std::vector<double> lx, ly;
    lx.reserve(x.size());
    ly.reserve(y.size());
    for (size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (x[i] <= 0.0 || y[i] == 0.0) continue;
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(std::abs(y[i])));
    }
    return linear_fit(lx, ly);
}

}  // namespace bosegas
