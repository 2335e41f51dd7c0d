#include "rockwave/oscillator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rockwave {

namespace {

// Discriminant 1 - 4 beta^2 in factored form; exact near beta = 1/2 where the
// direct expression cancels.
inline double disc_of(double beta) { return (1.0 - 2.0 * beta) * (1.0 + 2.0 * beta); }

// phi2(z) = (e^z - 1 - z)/z^2, stable for small |z|.
double phi2(double z) {
    if (std::abs(z) < 0.5) {
        double term = 0.5, sum = 0.5;  // z^0/2!
        for (int k = 1; k <= 16; ++k) {
            term *= z / (k + 2);
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    return (std::exp(z) - 1.0 - z) / (z * z);
}

} // namespace

Roots char_roots(double beta) {
    if (!(beta >= 0.0)) throw std::invalid_argument("oscillator: beta must be nonnegative");
    const double q = disc_of(beta);
    Roots r{};
    if (q > 0.0) {
        const double d = std::sqrt(q);
        // rationalized small root avoids cancellation for small beta
        r.lambda1 = -0.5 * (1.0 + d);
        r.lambda2 = -2.0 * beta * beta / (1.0 + d);
        r.kind = RootKind::overdamped;
    } else if (q == 0.0) {
        r.lambda1 = r.lambda2 = -0.5;
        r.kind = RootKind::critical;
    } else {
        const double w = 0.5 * std::sqrt(-q);
        r.lambda1 = {-0.5, -w};
        r.lambda2 = {-0.5, +w};
        r.kind = RootKind::underdamped;
    }
    return r;
}

KernelPair kernels(double t, double beta) {
    if (!(t >= 0.0)) throw std::invalid_argument("oscillator: t must be nonnegative");
    if (!(beta >= 0.0)) throw std::invalid_argument("oscillator: beta must be nonnegative");

    const double q = disc_of(beta);
    const double b2 = beta * beta;
    KernelPair kp{};

    const double z = -0.25 * q * t * t;  // = omega^2 t^2 underdamped, < 0 overdamped
    if (std::abs(z) < 1e-3) {
        // Near-critical band in the scale-free variable z. f(z) = sin(sqrt z)/sqrt z
        // and g(z) = cos(sqrt z) continue analytically across z = 0.
        const double f = 1.0 - z / 6.0 + z * z / 120.0 - z * z * z / 5040.0 + z * z * z * z / 362880.0;
        const double g = 1.0 - z / 2.0 + z * z / 24.0 - z * z * z / 720.0 + z * z * z * z / 40320.0;
        const double e = std::exp(-0.5 * t);
        kp.k1 = e * t * f;
        kp.k0 = e * (g + 0.5 * t * f);
    } else if (q > 0.0) {
        const double d = std::sqrt(q);
        const double lam2 = -2.0 * b2 / (1.0 + d);
        const double em = std::expm1(-d * t);      // in (-1, 0]
        const double e2 = std::exp(lam2 * t);      // <= 1
        kp.k1 = -e2 * em / d;
        kp.k0 = e2 * (1.0 + lam2 * em / d);
    } else {
        const double w = 0.5 * std::sqrt(-q);
        const double e = std::exp(-0.5 * t);
        const double sn = std::sin(w * t), cs = std::cos(w * t);
        kp.k1 = e * sn / w;
        kp.k0 = e * (cs + 0.5 * sn / w);
    }

    kp.dk0 = -b2 * kp.k1;
    kp.dk1 = kp.k0 - kp.k1;

    if (beta == 0.0) {
        kp.j1 = t + std::expm1(-t);
    } else if (q > 0.0 && std::abs(z) >= 1e-3) {
        // j1 = (1-k0)/beta^2 rearranged through expm1 so nothing cancels
        const double d = std::sqrt(q);
        const double lam1 = -0.5 * (1.0 + d);
        const double lam2 = -2.0 * b2 / (1.0 + d);
        kp.j1 = -std::expm1(lam2 * t) / b2 + kp.k1 / lam1;
    } else if (t * (1.0 + beta) < 0.05) {
        // short-time series for j1 from the power series of k1: with
        // k1 = sum a_k t^k (a_0 = 0, a_1 = 1, the rest by the mode ODE),
        // j1 picks up a_k t^{k+1}/(k+1).
        double ak = 0.0, ak1 = 1.0, sum = 0.0, tp = t;
        for (int k = 0; k <= 14; ++k) {
            sum += ak / (k + 1) * tp;
            tp *= t;
            const double ak2 = -((k + 1) * ak1 + b2 * ak) / double((k + 2) * (k + 1));
            ak = ak1;
            ak1 = ak2;
        }
        kp.j1 = sum;
    } else {
        kp.j1 = (1.0 - kp.k0) / b2;
    }
    return kp;
}

double j2(double t, double beta) {
    if (!(t >= 0.0)) throw std::invalid_argument("oscillator: t must be nonnegative");
    if (!(beta >= 0.0)) throw std::invalid_argument("oscillator: beta must be nonnegative");
    if (t == 0.0) return 0.0;

    const double q = disc_of(beta);
    const double b2 = beta * beta;
    const double zmax = t * std::max(beta, 0.5 * (1.0 + std::sqrt(std::max(q, 0.0))));
    const double pi_ = b2 * t * t;   // z1*z2
    const double sg = -t;            // z1+z2

    if (zmax <= 2.0) {
        // divided difference of phi2 at the two roots, expanded in the
        // symmetric functions so the branches never separate:
        // j2 = t^3 sum_k e_k/(k+3)!, e_k = (z1^{k+1}-z2^{k+1})/(z1-z2)
        double e_prev = 0.0, e_cur = 1.0;
        double fact = 6.0;  // (0+3)!
        double sum = e_cur / fact;
        for (int k = 1; k <= 30; ++k) {
            const double e_next = sg * e_cur - pi_ * e_prev;
            e_prev = e_cur;
            e_cur = e_next;
            fact *= (k + 3);
            const double term = e_cur / fact;
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return t * t * t * sum;
    }
    if (pi_ >= 0.25) {
        // safe zone for the explicit rearrangement through j1
        const KernelPair kp = kernels(t, beta);
        return t * kp.j1 - (kp.k1 + kp.j1 - t * kp.k0) / b2;
    }
    // remaining region has well-separated real roots
    const double d = std::sqrt(q);
    const double z1 = -0.5 * (1.0 + d) * t;
    const double z2 = -2.0 * b2 / (1.0 + d) * t;
    return t * t * t * (phi2(z1) - phi2(z2)) / (z1 - z2);
}

BoundsReport verify_pointwise_bounds(const RegimeCutoffs& cut,
                                     std::span<const double> t_grid,
                                     std::span<const double> beta_grid) {
    if (!(cut.delta > 0.0) || !(cut.delta < 0.5))
        throw std::invalid_argument("bounds: delta must lie in (0, 1/2)");
    if (!(cut.big_n > 0.5))
        throw std::invalid_argument("bounds: N must exceed 1/2");
    if (!(cut.c > 0.0))
        throw std::invalid_argument("bounds: c must be positive");
    if (t_grid.empty() || beta_grid.empty())
        throw std::invalid_argument("bounds: empty grid");

    double t_last = *std::max_element(t_grid.begin(), t_grid.end());

    RegimeMargin m[3][2];
    for (int r = 0; r < 3; ++r)
        for (int k = 0; k < 2; ++k)
            m[r][k] = {static_cast<BetaRegime>(r), k, 0.0, 0.0, 0.0, true};

    const double c = cut.c;
    for (double beta : beta_grid) {
        int reg = beta < cut.delta ? 0 : (beta <= cut.big_n ? 1 : 2);
        const double b2 = beta * beta;
        for (double t : t_grid) {
            const KernelPair kp = kernels(t, beta);
            const double ect = std::exp(-c * t);
            double shape0, shape1;
            switch (reg) {
                case 0: {
                    const double slow = std::exp(-c * t * b2);
                    shape0 = b2 * ect + slow;
                    shape1 = ect + slow;
                    break;
                }
                case 1:
                    shape0 = shape1 = ect;
                    break;
                default:
                    shape0 = ect;
                    shape1 = ect / beta;
            }
            const double r0 = std::abs(kp.k0) / shape0;
            const double r1 = std::abs(kp.k1) / shape1;
            if (r0 > m[reg][0].c_min) m[reg][0] = {static_cast<BetaRegime>(reg), 0, r0, t, beta, t < t_last};
            if (r1 > m[reg][1].c_min) m[reg][1] = {static_cast<BetaRegime>(reg), 1, r1, t, beta, t < t_last};
        }
    }

    BoundsReport rep{};
    rep.c_used = c;
    for (int r = 0; r < 3; ++r)
        for (int k = 0; k < 2; ++k)
            rep.margins.push_back(m[r][k]);

    // The slowest middle/large mode decays exactly like exp(-t/2); any faster
    // demand grows without bound, so flag it with the worst witness observed.
    rep.feasible = c <= 0.5;
    if (!rep.feasible) {
        RegimeMargin worst = m[1][0];
        for (int r = 1; r < 3; ++r)
            for (int k = 0; k < 2; ++k)
                if (m[r][k].c_min > worst.c_min) worst = m[r][k];
        rep.offender = worst;
    }
    return rep;
}

UniformDecayReport verify_uniform_decay(double s, double gamma, int nu, double delta,
                                        double c, double shift) {
    if (!(s + gamma > 0.0)) throw std::invalid_argument("decay scan: s + gamma must be positive");
    if (nu < 2) throw std::invalid_argument("decay scan: nu must be at least 2");
    if (!(delta > 0.0)) throw std::invalid_argument("decay scan: delta must be positive");
    if (!(c > 0.0)) throw std::invalid_argument("decay scan: c must be positive");

    const double m = (s + gamma) / nu;
    UniformDecayReport rep{};
    rep.horizons = {1e3, 1e4, 1e5};

    for (double tmax : rep.horizons) {
        double sup = 0.0;
        const int nt = 600, nb = 400;
        for (int i = 0; i <= nt; ++i) {
            // log-spaced with t=0 included
            const double t = i == 0 ? 0.0 : std::pow(tmax, static_cast<double>(i) / nt) - 1.0 + 1e-12;
            const double tw = std::pow(1.0 + t, 2.0 * m + shift);
            for (int j = 1; j <= nb; ++j) {
                const double beta = delta * std::pow(1e-6, 1.0 - static_cast<double>(j) / nb);
                const double v = tw * std::pow(beta, 4.0 * m) * std::exp(-c * beta * beta * t);
                sup = std::max(sup, v);
            }
        }
        rep.sups.push_back(sup);
    }
    rep.growth = rep.sups.back() / rep.sups.front();
    rep.stabilized = rep.growth <= 1.05;
    return rep;
}

} // namespace rockwave
