#include "rockwave/evolution.hpp"

#include "rockwave/oscillator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace rockwave {

void SimulationConfig::validate() const {
    if (grid.rank() != gs.rank())
        throw std::invalid_argument("grid rank does not match the graded structure");
    if (!(p > 1.0))
        throw std::invalid_argument("nonlinearity power must exceed 1");
    if (!(dt > 0.0) || !(t_max > 0.0))
        throw std::invalid_argument("dt and t_max must be positive");
    if (!(epsilon >= 0.0))
        throw std::invalid_argument("epsilon must be nonnegative");
    const double q = gs.hom_dimension();
    if (!(gamma > 0.0) || !(gamma < 0.5 * q))
        throw std::invalid_argument("gamma must lie in (0, Q/2)");
    if (snapshot_stride < 1)
        throw std::invalid_argument("snapshot stride must be at least 1");
    if (!(blowup_threshold > 0.0))
        throw std::invalid_argument("blow-up threshold must be positive");
    if (!(s_diag >= 0.0))
        throw std::invalid_argument("diagnostic Sobolev order must be nonnegative");
}

std::vector<double> build_initial_data(const Grid& g, const GradedStructure& gs,
                                       double gamma, double c1, double epsilon) {
    const std::size_t total = g.total();
    const int r = g.rank();
    const double decay = 0.5 * gs.hom_dimension() + gamma;
    std::vector<double> field(total);
    std::vector<int> idx(r);
    std::vector<double> x(r);
    for (std::size_t i = 0; i < total; ++i) {
        g.unravel(i, idx);
        for (int a = 0; a < r; ++a) x[a] = g.coord(a, idx[a]);
        const double qn = gs.quasi_norm(x);
        field[i] = epsilon * c1 * std::pow(1.0 + qn * qn, -0.5 * decay)
                 / std::log(std::numbers::e + qn);
    }
    return field;
}

Stepper::Stepper(const GradedStructure& gs, const Grid& grid, double p, double dt,
                 Scheme scheme, bool dealias)
    : grid_(grid), p_(p), dt_(dt), scheme_(scheme), dealias_(dealias), fft_(grid),
      symbol_(grid.symbol_table(gs)) {
    if (!(p_ > 1.0)) throw std::invalid_argument("nonlinearity power must exceed 1");
    if (!(dt_ > 0.0)) throw std::invalid_argument("dt must be positive");
    const std::size_t n = grid_.total();
    beta_.resize(n);
    k0_.resize(n);
    k1_.resize(n);
    j1_.resize(n);
    j2w_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double b = std::sqrt(symbol_[i]);
        beta_[i] = b;
        const KernelPair kp = kernels(dt_, b);
        k0_[i] = kp.k0;
        k1_[i] = kp.k1;
        j1_[i] = kp.j1;
        j2w_[i] = j2(dt_, b) / dt_;
    }
    if (dealias_) mask_ = grid_.dealias_mask();
    uhat_.assign(n, cplx{});
    vhat_.assign(n, cplx{});
    nhat_.resize(n);
    nhat2_.resize(n);
    u2_.resize(n);
    v2_.resize(n);
}

void Stepper::set_state(std::vector<cplx> uhat, std::vector<cplx> vhat) {
    if (uhat.size() != grid_.total() || vhat.size() != grid_.total())
        throw std::invalid_argument("state size does not match the grid");
    uhat_ = std::move(uhat);
    vhat_ = std::move(vhat);
}

void Stepper::nonlinear_hat(const std::vector<cplx>& uh, std::vector<cplx>& out,
                            double& maxabs) {
    const std::vector<double> u = fft_.inverse(uh);
    upow_.resize(u.size());
    double m = 0.0;
    bool saw_nan = false;
    if (p_ == 2.0) {
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double a = u[i];
            const double f = std::abs(a);
            if (std::isnan(f)) saw_nan = true; else m = std::max(m, f);
            upow_[i] = a * a;
        }
    } else if (p_ == 3.0) {
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double a = u[i];
            const double f = std::abs(a);
            if (std::isnan(f)) saw_nan = true; else m = std::max(m, f);
            upow_[i] = f * a * a;
        }
    } else {
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double f = std::abs(u[i]);
            if (std::isnan(f)) saw_nan = true; else m = std::max(m, f);
            upow_[i] = std::pow(f, p_);
        }
    }
    out = fft_.forward(upow_);
    if (dealias_) {
        for (std::size_t i = 0; i < out.size(); ++i)
            if (!mask_[i]) out[i] = cplx{};
    }
    maxabs = saw_nan ? std::numeric_limits<double>::infinity() : m;
}

double Stepper::step(bool nonlinear) {
    const std::size_t n = grid_.total();
    double maxabs = 0.0;
    if (nonlinear) {
        nonlinear_hat(uhat_, nhat_, maxabs);
    } else {
        const std::vector<double> u = fft_.inverse(uhat_);
        for (double x : u) maxabs = std::max(maxabs, std::abs(x));
        std::fill(nhat_.begin(), nhat_.end(), cplx{});
    }

    // Exponential-integrator step with the forcing frozen at its left value.
    for (std::size_t i = 0; i < n; ++i) {
        const cplx u = uhat_[i];
        const cplx v = vhat_[i];
        const cplx nl = nhat_[i];
        u2_[i] = k0_[i] * u + k1_[i] * v + j1_[i] * nl;
        v2_[i] = -symbol_[i] * k1_[i] * u + (k0_[i] - k1_[i]) * v + k1_[i] * nl;
    }

    if (scheme_ == Scheme::etd2 && nonlinear) {
        // Corrector: re-evaluate the forcing at the predicted endpoint and add
        // the linear-in-time Duhamel difference. The velocity row's moment
        // integral int_0^dt sigma d/dt[k1(dt-sigma)] dsigma collapses to j1.
        double ignored = 0.0;
        nonlinear_hat(u2_, nhat2_, ignored);
        const double inv_dt = 1.0 / dt_;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx dn = nhat2_[i] - nhat_[i];
            u2_[i] += j2w_[i] * dn;
            v2_[i] += j1_[i] * inv_dt * dn;
        }
    }

    uhat_.swap(u2_);
    vhat_.swap(v2_);
    return maxabs;
}

namespace {

double max_abs_field(Fft& fft, const std::vector<cplx>& coeffs) {
    const std::vector<double> f = fft.inverse(coeffs);
    double m = 0.0;
    bool saw_nan = false;
    for (double x : f) {
        const double a = std::abs(x);
        if (std::isnan(a)) saw_nan = true; else m = std::max(m, a);
    }
    return saw_nan ? std::numeric_limits<double>::infinity() : m;
}

} // namespace

RunOutcome run(const SimulationConfig& cfg) {
    cfg.validate();
    const auto clock_start = std::chrono::steady_clock::now();
    const Grid& g = cfg.grid;

    const std::vector<double> u0 =
        build_initial_data(g, cfg.gs, cfg.gamma, cfg.c1, cfg.epsilon);
    bool data_nonzero = false;
    for (double x : u0)
        if (x != 0.0) { data_nonzero = true; break; }

    Fft diag(g);
    const std::vector<cplx> uh0 = diag.forward(u0);
    Stepper st(cfg.gs, g, cfg.p, cfg.dt, cfg.scheme, cfg.dealias);
    st.set_state(uh0, uh0);

    const double nu = cfg.gs.hom_degree();
    const double w_l2 = cfg.gamma / nu;
    const double w_hs = (cfg.s_diag + cfg.gamma) / nu;

    RunOutcome out;
    out.status = RunStatus::completed;
    out.t_end = 0.0;
    out.config = cfg;
    out.threshold_consistent = true;
    out.steps = 0;

    auto sample_at = [&](double t, double maxabs) {
        Sample s;
        s.t = t;
        double ss = 0.0;
        for (const cplx& c : st.uhat()) ss += std::norm(c);
        s.l2 = std::sqrt(g.volume() * ss);
        s.hs = sobolev_norm(g, cfg.gs, st.uhat(), cfg.s_diag, SobolevKind::homogeneous);
        s.max_abs = maxabs;
        s.weighted_l2 = std::pow(1.0 + t, w_l2) * s.l2;
        s.weighted_hs = std::pow(1.0 + t, w_hs) * s.hs;
        out.series.push_back(s);
    };

    const long nsteps = std::lround(std::ceil(cfg.t_max / cfg.dt - 1e-9));
    std::vector<cplx> prev_u, prev_v, prev2_u, prev2_v;

    for (long k = 0;; ++k) {
        const double t = k * cfg.dt;

        if (k == nsteps) {
            const double m = max_abs_field(diag, st.uhat());
            out.t_end = t;
            if (!(m < cfg.blowup_threshold)) {
                out.status = RunStatus::blew_up;
                if (!out.t_cross_low) out.t_cross_low = t;
                if (!out.t_cross_high) out.t_cross_high = t;
            } else {
                sample_at(t, m);
            }
            break;
        }

        if (k % cfg.snapshot_stride == 0) {
            const double fm = max_abs_field(diag, st.uhat());
            if (fm < cfg.blowup_threshold) sample_at(t, fm);
        }

        // keep the state one step back so a detected blow-up can be bracketed
        prev2_u.swap(prev_u);
        prev2_v.swap(prev_v);
        prev_u = st.uhat();
        prev_v = st.vhat();

        const double m = st.step(true);
        ++out.steps;

        if (!out.t_cross_low && !(m < 1e6)) out.t_cross_low = t;
        if (!out.t_cross_high && !(m < 1e8)) out.t_cross_high = t;

        if (!(m < cfg.blowup_threshold)) {
            out.status = RunStatus::blew_up;
            if (k == 0) {
                out.t_end = 0.0;
            } else {
                // One halving pass: re-run the bracketing step at dt/2 and pick
                // the quarter-point of whichever half contains the crossing.
                Stepper half(cfg.gs, g, cfg.p, 0.5 * cfg.dt, cfg.scheme, cfg.dealias);
                half.set_state(prev2_u, prev2_v);
                half.step(true);
                const double mh = max_abs_field(diag, half.uhat());
                const double t_left = t - cfg.dt;
                out.t_end = !(mh < cfg.blowup_threshold) ? t_left + 0.25 * cfg.dt
                                                         : t_left + 0.75 * cfg.dt;
            }
            break;
        }
        if (data_nonzero && m < 1e-30) {
            out.status = RunStatus::stagnated;
            out.t_end = t;
            break;
        }
    }

    if (out.t_cross_low && out.t_cross_high) {
        const double lo = *out.t_cross_low;
        const double hi = *out.t_cross_high;
        out.threshold_consistent = (hi - lo) <= 0.03 * std::max(hi, 1e-12);
    }

    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start)
            .count();
    return out;
}

} // namespace rockwave
