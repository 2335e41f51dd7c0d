#pragma once

#include <functional>

namespace rockwave {

/// Result of an adaptive quadrature pass.
struct QuadResult {
    double value;
    double error;     ///< accumulated error estimate
    int panels;       ///< panels processed
    bool converged;
};

/// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a, b].
/// Splits the worst panel until the summed error estimate drops below
/// max(rel_tol*|value|, abs_tol) or the panel budget runs out.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-9, double abs_tol = 0.0, int max_panels = 4000);

} // namespace rockwave
