#include "rockwave/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

namespace rockwave {

void parallel_for_indexed(std::size_t count, int jobs,
                          const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    const std::size_t workers =
        std::min<std::size_t>(count, jobs < 1 ? 1 : static_cast<std::size_t>(jobs));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

// ---------- decay suite ----------

std::vector<DecayCaseSpec> decay_suite_default() {
    std::vector<DecayCaseSpec> cases;
    cases.push_back({GradedStructure::isotropic(2, 1), 0.0, 0.5, DataKind::position});
    cases.push_back({GradedStructure::isotropic(2, 1), 1.0, 0.5, DataKind::position});
    cases.push_back({GradedStructure::isotropic(1, 2), 0.0, 0.25, DataKind::position});
    return cases;
}

DecayCaseResult run_decay_case(const DecayCaseSpec& spec, double tolerance,
                               double t_min, double t_max, int samples) {
    const int n = spec.gs.rank();
    const double nu = spec.gs.hom_degree();
    const SpectralProfile prof = SpectralProfile::boundary(spec.gamma, n);

    DecayCaseResult res;
    res.s = spec.s;
    res.gamma = spec.gamma;
    res.theory = -(spec.s + spec.gamma) / nu;
    res.membership = prof.neg_order_status(spec.gamma, n);
    res.curve = decay_curve(spec.gs, prof, spec.s, spec.kind,
                            log_spaced_times(t_min, t_max, samples));
    res.check = check_slope(fit_decay(res.curve), res.theory, tolerance);
    return res;
}

// ---------- lifespan suite ----------

LifespanSpec::LifespanSpec()
    : gs(GradedStructure::isotropic(1, 1)), grid({4096}, {1024.0}), gamma(0.25),
      p(2.0), c1(1.0), dt(0.05), t_max(20000.0),
      eps{0.04, 0.028, 0.02, 0.014, 0.01, 0.007, 0.005, 0.0035},
      scheme(Scheme::etd2), halve_dt(true), tolerance(0.25) {}

namespace {

RunOutcome amplitude_run(const LifespanSpec& spec, double eps, double dt) {
    SimulationConfig cfg(spec.gs, spec.grid);
    cfg.gamma = spec.gamma;
    cfg.epsilon = eps;
    cfg.c1 = spec.c1;
    cfg.p = spec.p;
    cfg.dt = dt;
    cfg.t_max = spec.t_max;
    cfg.scheme = spec.scheme;
    cfg.snapshot_stride = 200;
    return run(cfg);
}

} // namespace

LifespanResult lifespan_suite(const LifespanSpec& spec, int jobs) {
    if (spec.eps.size() < 2)
        throw std::invalid_argument("lifespan: need at least two amplitudes");
    for (std::size_t i = 0; i + 1 < spec.eps.size(); ++i)
        if (!(spec.eps[i] > spec.eps[i + 1]))
            throw std::invalid_argument("lifespan: amplitudes must strictly decrease");

    const double qdim = spec.gs.hom_dimension();
    const double nu = spec.gs.hom_degree();
    const double kappa_inv =
        1.0 / (spec.p - 1.0) - qdim / (2.0 * nu) - spec.gamma / nu;
    if (!(kappa_inv > 0.0))
        throw std::invalid_argument(
            "lifespan: the power admits no finite blow-up exponent here");

    const std::size_t m = spec.eps.size();
    std::vector<LifespanPoint> pts(m);
    parallel_for_indexed(m, jobs, [&](std::size_t i) {
        const double eps = spec.eps[i];
        const RunOutcome full = amplitude_run(spec, eps, spec.dt);
        LifespanPoint& pt = pts[i];
        pt.eps = eps;
        pt.status = full.status;
        pt.t_blow = full.t_end;
        pt.threshold_consistent = full.threshold_consistent;
        pt.dt_change = 0.0;
        if (spec.halve_dt && full.status == RunStatus::blew_up) {
            const RunOutcome half = amplitude_run(spec, eps, 0.5 * spec.dt);
            if (half.status == RunStatus::blew_up) {
                pt.t_blow_half = half.t_end;
                pt.dt_change = std::abs(full.t_end - half.t_end) / full.t_end;
            } else {
                // halving dt flipped the outcome: a resolution red flag
                pt.dt_change = std::numeric_limits<double>::infinity();
            }
        }
    });

    LifespanResult res;
    res.points = std::move(pts);
    res.kappa_theory = 1.0 / kappa_inv;

    res.all_blew_up = true;
    bool all_consistent = true;
    res.monotone = true;
    res.max_dt_change = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const LifespanPoint& pt = res.points[i];
        if (pt.status != RunStatus::blew_up) res.all_blew_up = false;
        if (!pt.threshold_consistent) all_consistent = false;
        res.max_dt_change = std::max(res.max_dt_change, pt.dt_change);
        if (i > 0 && !(pt.t_blow > res.points[i - 1].t_blow)) res.monotone = false;
    }

    res.fit = FitResult{};
    res.check = SlopeCheck{};
    res.kappa_fit = 0.0;
    if (res.all_blew_up) {
        std::vector<double> lx(m), ly(m);
        for (std::size_t i = 0; i < m; ++i) {
            lx[i] = std::log(res.points[i].eps);
            ly[i] = std::log(res.points[i].t_blow);
        }
        res.fit = fit_line(lx, ly);
        res.kappa_fit = -res.fit.slope;
        res.check = check_slope(res.fit, -res.kappa_theory, spec.tolerance);
    }

    res.pass = res.all_blew_up && res.monotone && res.check.pass && all_consistent &&
               (!spec.halve_dt || res.max_dt_change <= 0.02);
    return res;
}

// ---------- dichotomy scan ----------

DichotomySpec::DichotomySpec()
    : gs(GradedStructure::isotropic(1, 1)), grid({4096}, {1024.0}), gamma(0.25),
      eps(0.25), c1(1.0), dt(0.05), t_max(3000.0),
      p_grid{2.0, 3.0, 3.5, 3.8, 4.5}, scheme(Scheme::etd2) {}

DichotomyResult dichotomy_scan(const DichotomySpec& spec, int jobs) {
    if (spec.p_grid.empty())
        throw std::invalid_argument("dichotomy: empty power grid");
    std::vector<double> grid_p = spec.p_grid;
    std::sort(grid_p.begin(), grid_p.end());

    const std::size_t m = grid_p.size();
    std::vector<DichotomyCell> cells(m);
    parallel_for_indexed(m, jobs, [&](std::size_t i) {
        SimulationConfig cfg(spec.gs, spec.grid);
        cfg.gamma = spec.gamma;
        cfg.epsilon = spec.eps;
        cfg.c1 = spec.c1;
        cfg.p = grid_p[i];
        cfg.dt = spec.dt;
        cfg.t_max = spec.t_max;
        cfg.scheme = spec.scheme;
        cfg.snapshot_stride = 100;
        const RunOutcome out = run(cfg);
        cells[i] = DichotomyCell{grid_p[i], out.status, out.t_end};
    });

    DichotomyResult res;
    res.cells = std::move(cells);
    res.p_crit = critical_exponent(spec.gs.hom_dimension(), spec.gamma,
                                   spec.gs.hom_degree());

    res.monotone_frontier = true;
    bool seen_complete = false;
    int last_blow = -1;
    int first_complete = -1;
    for (std::size_t i = 0; i < m; ++i) {
        switch (res.cells[i].status) {
        case RunStatus::blew_up:
            last_blow = static_cast<int>(i);
            if (seen_complete) res.monotone_frontier = false;
            break;
        case RunStatus::completed:
            if (first_complete < 0) first_complete = static_cast<int>(i);
            seen_complete = true;
            break;
        case RunStatus::stagnated:
            res.monotone_frontier = false;
            break;
        }
    }

    res.transition_contains_crit = false;
    if (res.monotone_frontier && last_blow >= 0 && first_complete == last_blow + 1) {
        res.transition = std::make_pair(res.cells[last_blow].p,
                                        res.cells[first_complete].p);
        res.transition_contains_crit = res.transition->first <= res.p_crit &&
                                       res.p_crit <= res.transition->second;
    }
    return res;
}

// ---------- interpolation-inequality probe ----------

namespace {

double unit_double(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;   // [0, 1)
}

struct ModeSet {
    std::vector<std::array<int, 2>> modes;
    std::vector<double> amp, phase;
};

// One field's band-limited mode content, drawn in a fixed lexicographic order
// over the closed half-space so the continuum field is resolution-independent.
// Excluding (0,0) keeps every field mean-free, as the homogeneous-norm
// denominator requires.
ModeSet make_modes(int band, std::uint64_t seed, std::size_t field_index) {
    std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * (field_index + 1));
    ModeSet ms;
    for (int k1 = 0; k1 <= band; ++k1) {
        for (int k2 = (k1 == 0 ? 1 : -band); k2 <= band; ++k2) {
            ms.modes.push_back({k1, k2});
            ms.amp.push_back(2.0 * unit_double(rng()) - 1.0);
            ms.phase.push_back(2.0 * std::numbers::pi * unit_double(rng()));
        }
    }
    return ms;
}

std::vector<double> sample_modes(const ModeSet& ms, const Grid& g) {
    const int n0 = g.dims[0];
    const int n1 = g.dims[1];
    std::vector<double> field(g.total(), 0.0);
    std::vector<double> x0(n0), x1(n1);
    for (int i = 0; i < n0; ++i) x0[i] = g.coord(0, i);
    for (int i = 0; i < n1; ++i) x1[i] = g.coord(1, i);
    for (std::size_t j = 0; j < ms.modes.size(); ++j) {
        const double k1 = ms.modes[j][0];
        const double k2 = ms.modes[j][1];
        const double a = ms.amp[j];
        const double ph = ms.phase[j];
        for (int i0 = 0; i0 < n0; ++i0) {
            const double part = k1 * x0[i0] + ph;
            double* row = field.data() + static_cast<std::size_t>(i0) * n1;
            for (int i1 = 0; i1 < n1; ++i1) row[i1] += a * std::cos(part + k2 * x1[i1]);
        }
    }
    return field;
}

} // namespace

GnProbeResult gn_probe_suite(const GnProbeSpec& spec, int jobs) {
    if (spec.gs.rank() != 2)
        throw std::invalid_argument("gn probe: rank-2 structures only");
    if (spec.fields < 1) throw std::invalid_argument("gn probe: need fields >= 1");
    if (spec.n_fine <= spec.n_coarse)
        throw std::invalid_argument("gn probe: fine resolution must exceed coarse");
    if (3 * spec.band >= spec.n_coarse)
        throw std::invalid_argument("gn probe: band too wide for the coarse grid");

    const Grid g_coarse({spec.n_coarse, spec.n_coarse},
                        {spec.box_length, spec.box_length});
    const Grid g_fine({spec.n_fine, spec.n_fine}, {spec.box_length, spec.box_length});

    const std::size_t m = static_cast<std::size_t>(spec.fields);
    std::vector<double> r_coarse(m), r_fine(m), q2_dev(m);
    parallel_for_indexed(m, jobs, [&](std::size_t i) {
        const ModeSet ms = make_modes(spec.band, spec.seed, i);
        const std::vector<double> fc = sample_modes(ms, g_coarse);
        const std::vector<double> ff = sample_modes(ms, g_fine);
        r_coarse[i] = gn_ratio(g_coarse, spec.gs, fc, spec.q, spec.s);
        r_fine[i] = gn_ratio(g_fine, spec.gs, ff, spec.q, spec.s);
        q2_dev[i] = std::abs(gn_ratio(g_fine, spec.gs, ff, 2.0, spec.s) - 1.0);
    });

    GnProbeResult res;
    res.max_coarse = *std::max_element(r_coarse.begin(), r_coarse.end());
    res.max_fine = *std::max_element(r_fine.begin(), r_fine.end());
    res.rel_change = std::abs(res.max_fine - res.max_coarse) / res.max_coarse;
    res.stable = res.rel_change < 0.10;
    res.q2_max_dev = *std::max_element(q2_dev.begin(), q2_dev.end());
    return res;
}

// ---------- derived run diagnostics ----------

double xs_norm(const RunOutcome& outcome, double s, double gamma, double nu) {
    if (!(nu > 0.0)) throw std::invalid_argument("xs norm: nu must be positive");
    double sup = 0.0;
    for (const Sample& smp : outcome.series) {
        const double w_l2 = std::pow(1.0 + smp.t, gamma / nu);
        const double w_hs = std::pow(1.0 + smp.t, (s + gamma) / nu);
        sup = std::max(sup, w_l2 * smp.l2 + w_hs * smp.hs);
    }
    return sup;
}

ThresholdResult find_completion_threshold(const SimulationConfig& base,
                                          double eps_lo, double eps_hi,
                                          double ratio) {
    if (!(eps_lo > 0.0) || !(eps_hi > eps_lo))
        throw std::invalid_argument("threshold: need 0 < eps_lo < eps_hi");
    if (!(ratio > 1.0))
        throw std::invalid_argument("threshold: bracket ratio must exceed 1");

    int runs = 0;
    auto survives = [&](double eps) {
        SimulationConfig cfg = base;
        cfg.epsilon = eps;
        ++runs;
        return run(cfg).status != RunStatus::blew_up;
    };

    if (!survives(eps_lo))
        throw std::domain_error("threshold: the low-amplitude run did not complete");
    if (survives(eps_hi))
        return ThresholdResult{eps_hi, std::numeric_limits<double>::infinity(), runs};

    double lo = eps_lo, hi = eps_hi;
    while (hi / lo > ratio) {
        const double mid = std::sqrt(lo * hi);
        if (survives(mid)) lo = mid; else hi = mid;
    }
    return ThresholdResult{lo, hi, runs};
}

// ---------- step-size self-convergence ----------

ConvergenceSpec::ConvergenceSpec()
    : gs(GradedStructure::isotropic(1, 1)), grid({256}, {64.0}), gamma(0.25),
      epsilon(0.2), c1(1.0), p(3.0), t_final(4.0), dt_coarse(0.2), dealias(true) {}

ConvergenceResult self_convergence(const ConvergenceSpec& spec, Scheme scheme) {
    const std::vector<double> u0 =
        build_initial_data(spec.grid, spec.gs, spec.gamma, spec.c1, spec.epsilon);
    Fft fft(spec.grid);
    const std::vector<cplx> uh0 = fft.forward(u0);

    auto solve = [&](double dt) {
        Stepper st(spec.gs, spec.grid, spec.p, dt, scheme, spec.dealias);
        st.set_state(uh0, uh0);
        const long n = std::lround(spec.t_final / dt);
        for (long k = 0; k < n; ++k) st.step(true);
        return st.uhat();
    };
    const std::vector<cplx> a = solve(spec.dt_coarse);
    const std::vector<cplx> b = solve(0.5 * spec.dt_coarse);
    const std::vector<cplx> c = solve(0.25 * spec.dt_coarse);

    auto l2_gap = [&](const std::vector<cplx>& x, const std::vector<cplx>& y) {
        double ss = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) ss += std::norm(x[i] - y[i]);
        return std::sqrt(spec.grid.volume() * ss);
    };

    ConvergenceResult res;
    res.err_coarse = l2_gap(a, b);
    res.err_fine = l2_gap(b, c);
    res.order = std::log2(res.err_coarse / res.err_fine);
    return res;
}

} // namespace rockwave
