#pragma once

#include <span>

namespace bosegas {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;  // max |y - (slope*x + intercept)|
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

// Least-squares slope of log|y| against log x. Points with y == 0 or
// x <= 0 are rejected.
LinearFit loglog_fit(std::span<const double> x, std::span<const double> y);

}  // namespace bosegas
