#pragma once

#include <cstddef>
#include <span>

namespace rockwave {

/// Least-squares line through (x_i, y_i).
struct FitResult {
    double slope;
    double intercept;
    double max_residual;  ///< largest |y - (slope*x + intercept)|
    double r_squared;
    std::size_t samples;
};

FitResult fit_line(std::span<const double> x, std::span<const double> y);

/// Fit log(values) against log(1+t): the decay-exponent regression used
/// throughout. Values must be positive.
FitResult fit_loglog(std::span<const double> t, std::span<const double> values);

/// A fitted slope held against a theoretical exponent.
struct SlopeCheck {
    FitResult fit;
    double theory;
    double rel_gap;   ///< |slope - theory| / |theory| (absolute gap if theory == 0)
    bool pass;
};

SlopeCheck check_slope(const FitResult& fit, double theory, double tolerance);

} // namespace rockwave
