#include "rockwave/fit.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rockwave {

FitResult fit_line(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size()) throw std::invalid_argument("fit: length mismatch");
    if (n < 2) throw std::invalid_argument("fit: need at least two samples");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= n; my /= n;

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("fit: degenerate abscissae");

    FitResult r{};
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    r.samples = n;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double res = y[i] - (r.slope * x[i] + r.intercept);
        ss_res += res * res;
        r.max_residual = std::max(r.max_residual, std::abs(res));
    }
    r.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return r;
}

FitResult fit_loglog(std::span<const double> t, std::span<const double> values) {
    std::vector<double> x(t.size()), y(values.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(t[i] > -1.0)) throw std::invalid_argument("fit: t must exceed -1");
        if (!(values[i] > 0.0)) throw std::invalid_argument("fit: values must be positive");
        x[i] = std::log1p(t[i]);
        y[i] = std::log(values[i]);
    }
    return fit_line(x, y);
}

SlopeCheck check_slope(const FitResult& fit, double theory, double tolerance) {
    SlopeCheck c{fit, theory, 0.0, false};
    const double gap = std::abs(fit.slope - theory);
    c.rel_gap = theory != 0.0 ? gap / std::abs(theory) : gap;
    c.pass = c.rel_gap <= tolerance;
    return c;
}

} // namespace rockwave
