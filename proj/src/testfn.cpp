#include "rockwave/testfn.hpp"

#include "rockwave/quadrature.hpp"
#include "rockwave/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace rockwave {

namespace {

// mollifier psi with its first two derivatives; psi vanishes for x <= 0
struct Psi {
    double v, d1, d2;
};

Psi eval_psi(BumpKind kind, double x) {
    if (x <= 0.0) return {0.0, 0.0, 0.0};
    if (kind == BumpKind::exp_inv) {
        const double v = std::exp(-1.0 / x);
        const double x2 = x * x;
        return {v, v / x2, v * (1.0 - 2.0 * x) / (x2 * x2)};
    }
    const double v = std::exp(-1.0 / (x * x));
    const double x3 = x * x * x;
    return {v, 2.0 * v / x3, 2.0 * v * (2.0 - 3.0 * x * x) / (x3 * x3)};
}

} // namespace

double Bump::phi(double r) const {
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    const Psi a = eval_psi(kind, 2.0 - r);
    const Psi b = eval_psi(kind, r - 1.0);
    return a.v / (a.v + b.v);
}

double Bump::dphi(double r) const {
    if (r <= 1.0 || r >= 2.0) return 0.0;
    const Psi a = eval_psi(kind, 2.0 - r);   // argument u = 2-r, du/dr = -1
    const Psi b = eval_psi(kind, r - 1.0);   // argument v = r-1, dv/dr = +1
    const double s = a.v + b.v;
    // quotient rule for N/S with N' = -a.d1, S' = -a.d1 + b.d1 collapses to
    return -(a.d1 * b.v + a.v * b.d1) / (s * s);
}

double Bump::d2phi(double r) const {
    if (r <= 1.0 || r >= 2.0) return 0.0;
    const Psi a = eval_psi(kind, 2.0 - r);
    const Psi b = eval_psi(kind, r - 1.0);
    const double s = a.v + b.v;
    const double n1 = -a.d1;               // d/dr of the numerator a.v
    const double s1 = -a.d1 + b.d1;        // d/dr of the denominator
    const double n2 = a.d2;                // second derivatives pick up (+-1)^2
    const double s2 = a.d2 + b.d2;
    const double phi1 = (n1 * s - a.v * s1) / (s * s);
    return (n2 * s - a.v * s2) / (s * s) - 2.0 * s1 * phi1 / s;
}

TestfnResult testfn_scaling(const TestfnSpec& spec) {
    if (spec.radii.size() < 5)
        throw std::invalid_argument("testfn: need at least five radii");
    for (std::size_t i = 0; i + 1 < spec.radii.size(); ++i)
        if (!(spec.radii[i] > 0.0 && spec.radii[i] < spec.radii[i + 1]))
            throw std::invalid_argument("testfn: radii must be positive increasing");
    if (!(spec.p > 1.0)) throw std::invalid_argument("testfn: p must exceed 1");
    if (spec.grid_points < 16 || (spec.grid_points & (spec.grid_points - 1)) != 0)
        throw std::invalid_argument("testfn: grid points must be a power of two >= 16");

    const Bump bump{spec.bump};
    const double pp = spec.p / (spec.p - 1.0);       // conjugate exponent p'
    const double pm = 1.0 / (spec.p - 1.0);
    const double nu = spec.gs.hom_degree();
    const double qdim = spec.gs.hom_dimension();
    const int rank = spec.gs.rank();

    TestfnResult res;
    res.radii = spec.radii;
    res.theory_first = qdim + nu - nu * pp;
    res.theory_second = qdim + nu - 2.0 * nu * pp;

    for (const double radius : spec.radii) {
        const double tscale = std::pow(radius, nu);

        // time factors; the derivative ones live on [tscale, 2*tscale]
        auto dt_integrand = [&](double t, bool second) {
            const double tau = t / tscale;
            const double f = bump.phi(tau);
            if (!(f >= spec.phi_floor)) return 0.0;
            const double der =
                second ? bump.d2phi(tau) / (tscale * tscale) : bump.dphi(tau) / tscale;
            if (der == 0.0) return 0.0;
            return std::exp(pp * std::log(std::abs(der)) - pm * std::log(f));
        };
        const double t1 =
            integrate([&](double t) { return dt_integrand(t, false); }, tscale,
                      2.0 * tscale)
                .value;
        const double t3 =
            integrate([&](double t) { return dt_integrand(t, true); }, tscale,
                      2.0 * tscale)
                .value;
        const double t2 =
            integrate([&](double t) { return bump.phi(t / tscale); }, 0.0,
                      2.0 * tscale)
                .value;

        // spatial factors on a grid proportional to the radius; the cutoff's
        // support reaches (2R)^{w_j} along axis j, so each box edge scales
        // with its own dilation weight
        std::vector<int> dims(rank, spec.grid_points);
        std::vector<double> box(rank);
        for (int a = 0; a < rank; ++a)
            box[a] = std::pow(spec.box_factor * radius, spec.gs.weights()[a]);
        const Grid grid(dims, box);
        const std::size_t total = grid.total();
        const double cell = grid.cell_volume();

        std::vector<double> cutoff(total);
        std::vector<int> idx(rank);
        std::vector<double> x(rank);
        double plain_sum = 0.0;
        for (std::size_t i = 0; i < total; ++i) {
            grid.unravel(i, idx);
            for (int a = 0; a < rank; ++a) x[a] = grid.coord(a, idx[a]);
            cutoff[i] = bump.phi(spec.gs.quasi_norm(x) / radius);
            plain_sum += cutoff[i];
        }
        const double x_plain = plain_sum * cell;

        Fft fft(grid);
        std::vector<cplx> hat = fft.forward(cutoff);
        const std::vector<double> symbol = grid.symbol_table(spec.gs);
        for (std::size_t i = 0; i < total; ++i) hat[i] *= symbol[i];
        const std::vector<double> op_cutoff = fft.inverse(hat);

        double op_sum = 0.0;
        for (std::size_t i = 0; i < total; ++i) {
            const double f = cutoff[i];
            if (!(f >= spec.phi_floor)) continue;
            const double g = std::abs(op_cutoff[i]);
            if (g == 0.0) continue;
            op_sum += std::exp(pp * std::log(g) - pm * std::log(f));
        }
        const double x_op = op_sum * cell;

        res.time_integral.push_back(x_plain * t1);
        res.op_integral.push_back(x_op * t2);
        res.time2_integral.push_back(x_plain * t3);
    }

    std::vector<double> lr(res.radii.size());
    for (std::size_t i = 0; i < lr.size(); ++i) lr[i] = std::log(res.radii[i]);
    auto log_of = [](const std::vector<double>& v) {
        std::vector<double> out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!(v[i] > 0.0))
                throw std::domain_error("testfn: nonpositive integral in the fit");
            out[i] = std::log(v[i]);
        }
        return out;
    };
    res.time_fit = fit_line(lr, log_of(res.time_integral));
    res.op_fit = fit_line(lr, log_of(res.op_integral));
    res.time2_fit = fit_line(lr, log_of(res.time2_integral));
    return res;
}

} // namespace rockwave
