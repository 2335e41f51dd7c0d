#include "rockwave/oracle.hpp"

#include "rockwave/oscillator.hpp"
#include "rockwave/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace rockwave {

namespace {

double kernel_of(double t, double beta, DataKind kind) {
    const KernelPair kp = kernels(t, beta);
    return kind == DataKind::position ? kp.k0 : kp.k1;
}

void require_isotropic(const GradedStructure& gs) {
    for (int j = 0; j < gs.rank(); ++j)
        if (gs.weights()[j] != 1 || gs.coeffs()[j] != 1.0)
            throw std::invalid_argument("oracle: radial reduction needs the isotropic structure");
}

} // namespace

double SpectralProfile::value(double r) const {
    return std::pow(r, alpha) * std::exp(-r * r);
}

bool SpectralProfile::in_l2(int n) const { return 2.0 * alpha + n > 0.0; }

Membership SpectralProfile::neg_order_status(double gamma, int n) const {
    const double margin = 2.0 * (alpha - gamma) + n;
    if (margin > 1e-12) return Membership::convergent;
    if (margin < -1e-12) return Membership::divergent;
    return Membership::log_divergent;
}

double sphere_area(int n) {
    if (n < 1) throw std::invalid_argument("oracle: dimension must be positive");
    return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

double linear_norm_sq(const GradedStructure& gs, const SpectralProfile& profile,
                      double s, double t, DataKind kind) {
    require_isotropic(gs);
    if (!(t >= 0.0)) throw std::invalid_argument("oracle: t must be nonnegative");
    const int n = gs.rank();
    const double nu = gs.hom_degree();
    const double pw = 2.0 * s + 2.0 * profile.alpha + n - 1.0;
    if (!(pw > -1.0))
        throw std::domain_error("oracle: radial integral diverges at the origin for this (s, alpha)");

    // truncation where r^pw exp(-2r^2) has fallen ~1e-31 below its peak
    const double rmax = std::sqrt(0.5 * (std::max(pw, 0.0) + 80.0));

    auto integrand = [&](double r) {
        if (r <= 0.0) return 0.0;
        const double beta = std::pow(r, 0.5 * nu);
        const double k = kernel_of(t, beta, kind);
        const double g = std::exp(-r * r);
        return std::pow(r, pw) * k * k * g * g;
    };
    const QuadResult quad = integrate(integrand, 0.0, rmax, 1e-9, 0.0, 6000);
    return sphere_area(n) * quad.value;
}

Membership AnisotropicProfile::neg_order_status(double gamma, const GradedStructure& gs) const {
    const double margin = 2.0 * sym_power * gs.hom_degree() - 2.0 * gamma + gs.hom_dimension();
    if (margin > 1e-12) return Membership::convergent;
    if (margin < -1e-12) return Membership::divergent;
    return Membership::log_divergent;
}

AnisotropicProfile AnisotropicProfile::boundary(double gamma, const GradedStructure& gs) {
    return {(gamma - 0.5 * gs.hom_dimension()) / gs.hom_degree()};
}

double anisotropic_norm_sq(const GradedStructure& gs, const AnisotropicProfile& profile,
                           double s, double t, DataKind kind) {
    if (gs.rank() != 2)
        throw std::invalid_argument("oracle: nested quadrature is implemented for rank 2");
    if (!(t >= 0.0)) throw std::invalid_argument("oracle: t must be nonnegative");
    const double nu = gs.hom_degree();
    const double sexp = 2.0 * (s / nu + profile.sym_power);
    // membership of the evolved norm at the origin
    if (!(2.0 * (s + profile.sym_power * nu) + gs.hom_dimension() > 0.0))
        throw std::domain_error("oracle: frequency integral diverges at the origin");

    const double xmax = 7.0;  // exp(-2*49) tails are negligible
    double xi[2];

    auto inner = [&](double x1) {
        xi[0] = x1;
        auto f = [&](double x2) {
            xi[1] = x2;
            const double a = gs.symbol(xi);
            if (a <= 0.0) return 0.0;
            const double beta = std::sqrt(a);
            const double k = kernel_of(t, beta, kind);
            const double g = std::exp(-(xi[0] * xi[0] + xi[1] * xi[1]));
            return std::pow(a, sexp) * k * k * g * g;
        };
        return integrate(f, 0.0, xmax, 1e-7, 1e-300, 1200).value;
    };
    const QuadResult outer = integrate(inner, 0.0, xmax, 1e-6, 1e-300, 1200);
    return 4.0 * outer.value;  // even in each axis
}

std::vector<double> log_spaced_times(double t_min, double t_max, int count) {
    if (!(t_min > 0.0) || !(t_max > t_min) || count < 2)
        throw std::invalid_argument("oracle: bad time window");
    std::vector<double> ts(count);
    const double la = std::log(t_min), lb = std::log(t_max);
    for (int i = 0; i < count; ++i)
        ts[i] = std::exp(la + (lb - la) * i / (count - 1));
    return ts;
}

DecayCurve decay_curve(const GradedStructure& gs, const SpectralProfile& profile,
                       double s, DataKind kind, const std::vector<double>& times) {
    DecayCurve c;
    c.times = times;
    c.norms.reserve(times.size());
    for (double t : times)
        c.norms.push_back(std::sqrt(linear_norm_sq(gs, profile, s, t, kind)));
    return c;
}

FitResult fit_decay(const DecayCurve& curve) {
    return fit_loglog(curve.times, curve.norms);
}

} // namespace rockwave
