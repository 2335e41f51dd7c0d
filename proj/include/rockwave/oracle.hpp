#pragma once

#include "rockwave/fit.hpp"
#include "rockwave/graded.hpp"

#include <vector>

namespace rockwave {

/// Which datum a kernel propagates: position rides k0, velocity rides k1.
enum class DataKind { position, velocity };

enum class Membership { convergent, log_divergent, divergent };

/// Radial power-Gaussian data profile |xi|^alpha exp(-|xi|^2) in frequency
/// space. alpha tunes the low-frequency mass; the decay-order membership
/// of the data follows from it exactly.
struct SpectralProfile {
    double alpha;

    double value(double r) const;
    /// Square-integrability: 2*alpha + n > 0.
    bool in_l2(int n) const;
    /// Membership status in the order -gamma space: sign of 2(alpha-gamma)+n.
    Membership neg_order_status(double gamma, int n) const;
    /// Profile matched to the membership boundary for the given gamma.
    static SpectralProfile boundary(double gamma, int n) { return {gamma - 0.5 * n}; }
};

/// Squared evolved norm of order s at time t for the linear flow with radial
/// data, reduced to one radial frequency integral:
///   sigma_{n-1} int_0^inf r^{2s+n-1} |K(t, r^{nu/2})|^2 |profile(r)|^2 dr.
/// The structure must be isotropic; the kernel index follows `kind`.
double linear_norm_sq(const GradedStructure& gs, const SpectralProfile& profile,
                      double s, double t, DataKind kind);

/// Anisotropic data profile a(xi)^{sym_power} exp(-|xi|^2); sym_power plays
/// alpha's role through the symbol's quasi-homogeneous scale.
struct AnisotropicProfile {
    double sym_power;

    Membership neg_order_status(double gamma, const GradedStructure& gs) const;
    static AnisotropicProfile boundary(double gamma, const GradedStructure& gs);
};

/// Same evolved quantity on a rank-2 structure by nested quadrature over one
/// frequency quadrant (the integrand is even per axis).
double anisotropic_norm_sq(const GradedStructure& gs, const AnisotropicProfile& profile,
                           double s, double t, DataKind kind);

/// Norm samples along a time grid (norms, not squares).
struct DecayCurve {
    std::vector<double> times;
    std::vector<double> norms;
};

/// Log-spaced sample times for decay regressions.
std::vector<double> log_spaced_times(double t_min, double t_max, int count);

DecayCurve decay_curve(const GradedStructure& gs, const SpectralProfile& profile,
                       double s, DataKind kind, const std::vector<double>& times);

/// Regression of log(norm) on log(1+t).
FitResult fit_decay(const DecayCurve& curve);

/// Surface measure of the unit sphere in R^n.
double sphere_area(int n);

} // namespace rockwave
