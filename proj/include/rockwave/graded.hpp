#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rockwave {

/// Anisotropic structure on R^n: per-axis dilation weights nu_j, operator
/// coefficients a_j, and a base order nu0 that every weight divides. The
/// associated operator acts axis-wise with derivative order 2*nu0/nu_j and
/// has Fourier symbol  a(xi) = sum_j a_j xi_j^(2*nu0/nu_j).
class GradedStructure {
public:
    GradedStructure(std::vector<int> weights, std::vector<double> coeffs, int nu0);

    /// Isotropic shorthand: n unit weights, unit coefficients.
    static GradedStructure isotropic(int n, int nu0);

    int rank() const { return static_cast<int>(weights_.size()); }
    const std::vector<int>& weights() const { return weights_; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    int nu0() const { return nu0_; }

    /// Homogeneous dimension Q = sum of weights.
    int hom_dimension() const { return q_; }
    /// Homogeneous degree nu = 2*nu0 of the operator.
    int hom_degree() const { return 2 * nu0_; }
    /// Per-axis derivative order 2*nu0/nu_j (always an even integer).
    int axis_order(int j) const { return 2 * nu0_ / weights_[j]; }

    /// Fourier symbol a(xi) >= 0.
    double symbol(std::span<const double> xi) const;

    /// Anisotropic dilation D_r xi = (r^{nu_1} xi_1, ..., r^{nu_n} xi_n).
    std::vector<double> dilate(double r, std::span<const double> xi) const;

    /// Homogeneous quasi-norm |x| = (sum_j |x_j|^(2*nu0/nu_j))^(1/(2*nu0)),
    /// which satisfies |D_r x| = r|x|.
    double quasi_norm(std::span<const double> x) const;

private:
    std::vector<int> weights_;
    std::vector<double> coeffs_;
    int nu0_;
    int q_;
};

/// Critical power 1 + 2*nu/(Q + 2*gamma); requires gamma in (0, Q/2).
double critical_exponent(int q, double gamma, int nu);

/// Positive root of 2*g^2 + Q*g - nu*Q = 0; the pivot between the two
/// branches of the small-data global existence condition. Always < nu.
double gamma_tilde(int q, int nu);

enum class Regime { subcritical, critical, supercritical };

/// Outcome of classifying a power p against the structure (Q, nu, gamma, s).
struct ExponentReport {
    double p_crit;
    double gamma_tilde;
    Regime regime;                    ///< p relative to p_crit
    double global_lower;              ///< lower edge of the admissible range
    bool lower_strict;                ///< strict below gamma_tilde, inclusive above
    std::optional<double> global_upper; ///< Q/(Q-2s) cap when Q > 2s
    bool global_ok;                   ///< p satisfies the full admissible range
    std::optional<double> kappa;      ///< lifespan exponent, present when defined
};

/// Classify p for data regularity s and data decay index gamma.
ExponentReport classify(int q, int nu, double gamma, double s, double p);

const char* regime_name(Regime r);

} // namespace rockwave
