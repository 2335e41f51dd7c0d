#include "rockwave/graded.hpp"

#include <cmath>
#include <stdexcept>

namespace rockwave {

namespace {

double ipow(double x, int n) {
    double r = 1.0;
    for (double b = x; n > 0; n >>= 1, b *= b)
        if (n & 1) r *= b;
    return r;
}

} // namespace

GradedStructure::GradedStructure(std::vector<int> weights, std::vector<double> coeffs, int nu0)
    : weights_(std::move(weights)), coeffs_(std::move(coeffs)), nu0_(nu0), q_(0) {
    if (weights_.empty())
        throw std::invalid_argument("graded: empty weight list");
    if (coeffs_.size() != weights_.size())
        throw std::invalid_argument("graded: coefficient count does not match rank");
    if (nu0_ < 1)
        throw std::invalid_argument("graded: nu0 must be a positive integer");
    for (int w : weights_) {
        if (w < 1)
            throw std::invalid_argument("graded: weights must be positive integers");
        if (nu0_ % w != 0)
            throw std::invalid_argument("graded: nu0 must be a common multiple of the weights");
        q_ += w;
    }
    for (double a : coeffs_)
        if (!(a > 0.0))
            throw std::invalid_argument("graded: coefficients must be positive");
}

GradedStructure GradedStructure::isotropic(int n, int nu0) {
    if (n < 1) throw std::invalid_argument("graded: rank must be positive");
    return GradedStructure(std::vector<int>(n, 1), std::vector<double>(n, 1.0), nu0);
}

double GradedStructure::symbol(std::span<const double> xi) const {
    if (static_cast<int>(xi.size()) != rank())
        throw std::invalid_argument("graded: frequency dimension mismatch");
    double s = 0.0;
    for (int j = 0; j < rank(); ++j)
        s += coeffs_[j] * ipow(xi[j], axis_order(j));
    return s;
}

std::vector<double> GradedStructure::dilate(double r, std::span<const double> xi) const {
    if (static_cast<int>(xi.size()) != rank())
        throw std::invalid_argument("graded: frequency dimension mismatch");
    std::vector<double> out(xi.size());
    for (int j = 0; j < rank(); ++j)
        out[j] = ipow(r, weights_[j]) * xi[j];
    return out;
}

double GradedStructure::quasi_norm(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != rank())
        throw std::invalid_argument("graded: point dimension mismatch");
    double s = 0.0;
    for (int j = 0; j < rank(); ++j)
        s += std::pow(std::abs(x[j]), static_cast<double>(axis_order(j)));
    return std::pow(s, 1.0 / (2.0 * nu0_));
}

double critical_exponent(int q, double gamma, int nu) {
    if (q < 1) throw std::invalid_argument("classify: Q must be positive");
    if (nu < 2) throw std::invalid_argument("classify: nu must be at least 2");
    if (!(gamma > 0.0) || !(gamma < 0.5 * q))
        throw std::invalid_argument("classify: gamma must lie in (0, Q/2)");
    return 1.0 + 2.0 * nu / (q + 2.0 * gamma);
}

double gamma_tilde(int q, int nu) {
    if (q < 1) throw std::invalid_argument("classify: Q must be positive");
    if (nu < 2) throw std::invalid_argument("classify: nu must be at least 2");
    double qq = static_cast<double>(q);
    return 0.25 * (-qq + std::sqrt(qq * qq + 8.0 * nu * qq));
}

ExponentReport classify(int q, int nu, double gamma, double s, double p) {
    if (!(p > 1.0)) throw std::invalid_argument("classify: p must exceed 1");
    if (!(s > 0.0)) throw std::invalid_argument("classify: s must be positive");

    ExponentReport rep{};
    rep.p_crit = critical_exponent(q, gamma, nu);
    rep.gamma_tilde = gamma_tilde(q, nu);

    if (p < rep.p_crit)      rep.regime = Regime::subcritical;
    else if (p > rep.p_crit) rep.regime = Regime::supercritical;
    else                     rep.regime = Regime::critical;

    // Admissible range for small-data global existence. Below gamma_tilde the
    // lower edge is p_crit with strict inequality; above it the edge relaxes
    // to 1 + 2*gamma/Q, inclusive.
    if (gamma <= rep.gamma_tilde) {
        rep.global_lower = rep.p_crit;
        rep.lower_strict = true;
    } else {
        rep.global_lower = 1.0 + 2.0 * gamma / q;
        rep.lower_strict = false;
    }
    if (q > 2.0 * s)
        rep.global_upper = q / (q - 2.0 * s);

    bool above = rep.lower_strict ? (p > rep.global_lower) : (p >= rep.global_lower);
    bool below = !rep.global_upper || p <= *rep.global_upper;
    rep.global_ok = above && below;

    // Lifespan exponent kappa = (1/(p-1) - Q/(2 nu) - gamma/nu)^(-1), defined
    // while the bracket stays positive.
    double bracket = 1.0 / (p - 1.0) - 0.5 * q / nu - gamma / nu;
    if (bracket > 0.0)
        rep.kappa = 1.0 / bracket;

    return rep;
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::subcritical:   return "subcritical";
        case Regime::critical:      return "critical";
        case Regime::supercritical: return "supercritical";
    }
    return "?";
}

} // namespace rockwave
