#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace rockwave {

/// Branch of the mode equation u'' + u' + beta^2 u = 0.
enum class RootKind { overdamped, critical, underdamped };

/// Characteristic roots (-1 +- sqrt(1-4 beta^2))/2, lambda1 carrying the more
/// negative real part (the more negative imaginary part when they tie).
struct Roots {
    std::complex<double> lambda1, lambda2;
    RootKind kind;
};

Roots char_roots(double beta);

/// Fundamental pair at time t: k0 solves (1,0) data, k1 solves (0,1) data.
/// dk0, dk1 are the time derivatives, j1 = int_0^t k1.
struct KernelPair {
    double k0, k1, dk0, dk1, j1;
};

/// Evaluate the fundamental pair. Stable across the branch switch at
/// beta = 1/2 (series in the scale-free variable (beta^2-1/4)t^2 near it)
/// and free of overflow for t, beta up to 1e6.
KernelPair kernels(double t, double beta);

/// Second Duhamel moment int_0^t sigma k1(t - sigma) dsigma, the weight of
/// the second-order corrector step.
double j2(double t, double beta);

/// Frequency cutoffs separating the three estimate regimes, plus the decay
/// rate c used in the bound shapes. The middle and large regimes cannot decay
/// faster than exp(-t/2), so c above 1/2 is never certifiable.
struct RegimeCutoffs {
    double delta = 0.1;
    double big_n = 10.0;
    double c = 0.25;
};

enum class BetaRegime { small, middle, large };

/// Worst observed ratio |kernel| / bound-shape for one kernel in one regime.
struct RegimeMargin {
    BetaRegime regime;
    int kernel;          ///< 0 or 1
    double c_min;        ///< minimal feasible constant on the grid
    double t_arg, beta_arg;
    bool t_interior;     ///< the max was not attained at the final grid time
};

struct BoundsReport {
    std::vector<RegimeMargin> margins;
    double c_used;
    bool feasible;                       ///< false when c exceeds the 1/2 cap
    std::optional<RegimeMargin> offender; ///< the witness when infeasible
};

/// Sweep a (t, beta) grid and report the minimal constants making the
/// regime-wise pointwise bounds hold:
///   small:  |k0| <= C(beta^2 e^{-ct} + e^{-c t beta^2}),
///           |k1| <= C(e^{-ct} + e^{-c t beta^2})
///   middle: |k0|, |k1| <= C e^{-ct}
///   large:  |k0| <= C e^{-ct},  |k1| <= C e^{-ct}/beta
BoundsReport verify_pointwise_bounds(const RegimeCutoffs& cut,
                                     std::span<const double> t_grid,
                                     std::span<const double> beta_grid);

/// Supremum scan of (1+t)^{2(s+gamma)/nu} beta^{4(s+gamma)/nu} e^{-c t beta^2}
/// over beta in (0, delta], t in [0, t_max], at several horizons. The sup must
/// stabilize as the horizon grows; shifting the time exponent up by `shift`
/// breaks that and the scan reports growth instead.
struct UniformDecayReport {
    std::vector<double> horizons;
    std::vector<double> sups;
    double growth;      ///< sup(largest horizon) / sup(smallest)
    bool stabilized;    ///< growth within 5 percent
};

UniformDecayReport verify_uniform_decay(double s, double gamma, int nu, double delta,
                                        double c = 1.0, double shift = 0.0);

} // namespace rockwave
