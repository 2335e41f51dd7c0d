#include "rockwave/experiments.hpp"

#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <vector>

using namespace rockwave;

TEST_CASE("indexed parallel driver fills every slot exactly once") {
    for (int jobs : {1, 4}) {
        CAPTURE(jobs);
        std::vector<int> hits(1000, 0);
        std::atomic<int> calls{0};
        parallel_for_indexed(hits.size(), jobs, [&](std::size_t i) {
            ++hits[i];
            ++calls;
        });
        CHECK(calls.load() == 1000);
        for (std::size_t i = 0; i < hits.size(); ++i) CHECK(hits[i] == 1);
    }

    SUBCASE("zero jobs degrade to one worker, zero count is a no-op") {
        bool called = false;
        parallel_for_indexed(0, 3, [&](std::size_t) { called = true; });
        CHECK_FALSE(called);
        int count = 0;
        parallel_for_indexed(5, 0, [&](std::size_t) { ++count; });
        CHECK(count == 5);
    }

    SUBCASE("a worker exception reaches the caller") {
        for (int jobs : {1, 4}) {
            CAPTURE(jobs);
            CHECK_THROWS_AS(parallel_for_indexed(
                                100, jobs,
                                [](std::size_t i) {
                                    if (i == 37) throw std::runtime_error("worker 37");
                                }),
                            std::runtime_error);
        }
    }
}

TEST_CASE("benchmark decay cases match the predicted exponents") {
    const auto suite = decay_suite_default();
    REQUIRE(suite.size() == 3);

    // -(s+gamma)/nu for the three configurations
    const double theories[3] = {-0.25, -0.75, -0.0625};
    for (std::size_t i = 0; i < suite.size(); ++i) {
        CAPTURE(i);
        const DecayCaseResult r = run_decay_case(suite[i]);
        CHECK(r.theory == doctest::Approx(theories[i]).epsilon(1e-14));
        // boundary-matched data: exactly log-divergent at the membership line
        CHECK(r.membership == Membership::log_divergent);
        CHECK(r.check.pass);
        CHECK(r.check.rel_gap <= 0.05);
        CHECK(r.curve.norms.size() == 30);
    }

    // the third configuration exercises the higher-order operator
    CHECK(suite[2].gs.hom_degree() == 4);
    CHECK(suite[2].gs.hom_dimension() == 1);
}

TEST_CASE("trajectory supremum diagnostic") {
    RunOutcome o;
    o.status = RunStatus::completed;

    SUBCASE("empty series gives zero") {
        CHECK(xs_norm(o, 1.0, 0.5, 2.0) == 0.0);
    }

    SUBCASE("hand-evaluated two-sample supremum") {
        // s = 1, gamma = 1/2, nu = 2: weights (1+t)^{1/4} and (1+t)^{3/4}.
        // t = 0 contributes 1 + 2 = 3; t = 3 contributes
        // 4^{1/4} * 0.5 + 4^{3/4} * 1 = 0.7071 + 2.8284 = 3.5355.
        Sample a{};
        a.t = 0.0;
        a.l2 = 1.0;
        a.hs = 2.0;
        Sample b{};
        b.t = 3.0;
        b.l2 = 0.5;
        b.hs = 1.0;
        o.series = {a, b};
        const double want = std::pow(4.0, 0.25) * 0.5 + std::pow(4.0, 0.75);
        CHECK(xs_norm(o, 1.0, 0.5, 2.0) == doctest::Approx(want).epsilon(1e-14));
        CHECK(want > 3.0); // the later sample wins
    }

    SUBCASE("nu must be positive") {
        CHECK_THROWS_AS(xs_norm(o, 1.0, 0.5, 0.0), std::invalid_argument);
    }
}

TEST_CASE("completion-threshold bisection brackets the boundary amplitude") {
    SimulationConfig cfg(GradedStructure::isotropic(1, 1), Grid({256}, {64.0}));
    cfg.gamma = 0.25;
    cfg.p = 2.0;
    cfg.dt = 0.05;
    cfg.t_max = 30.0;

    SUBCASE("a genuine bracket shrinks to the requested ratio") {
        const ThresholdResult r = find_completion_threshold(cfg, 0.01, 0.5, 2.0);
        CHECK(r.eps_complete >= 0.01);
        CHECK(r.eps_blow <= 0.5);
        CHECK(r.eps_blow > r.eps_complete);
        CHECK(r.eps_blow / r.eps_complete <= 2.0);
        CHECK(r.runs >= 4);
    }

    SUBCASE("an entirely surviving bracket reports no blow-up amplitude") {
        const ThresholdResult r = find_completion_threshold(cfg, 0.001, 0.002, 2.0);
        CHECK(r.eps_complete == doctest::Approx(0.002).epsilon(1e-15));
        CHECK(std::isinf(r.eps_blow));
        CHECK(r.runs == 2);
    }

    SUBCASE("a blowing low end is rejected") {
        CHECK_THROWS_AS(find_completion_threshold(cfg, 0.5, 1.0, 2.0), std::domain_error);
    }

    SUBCASE("bracket validation") {
        CHECK_THROWS_AS(find_completion_threshold(cfg, 0.0, 1.0, 2.0), std::invalid_argument);
        CHECK_THROWS_AS(find_completion_threshold(cfg, 0.3, 0.2, 2.0), std::invalid_argument);
        CHECK_THROWS_AS(find_completion_threshold(cfg, 0.1, 0.2, 1.0), std::invalid_argument);
    }
}

TEST_CASE("amplitude ladder machinery on a fast shrunken benchmark") {
    // Amplitudes well above the calibrated ladder: blow-up times are short
    // and the measured exponent sits below its small-amplitude limit, so the
    // gate here is the machinery (monotonicity, dt robustness, bookkeeping),
    // with a wide exponent tolerance.
    LifespanSpec spec;
    spec.grid = Grid({256}, {64.0});
    spec.t_max = 200.0;
    spec.eps = {0.2, 0.1, 0.05};
    spec.tolerance = 0.6;

    const LifespanResult r = lifespan_suite(spec, 1);
    CHECK(r.kappa_theory == doctest::Approx(1.6).epsilon(1e-12));
    CHECK(r.all_blew_up);
    CHECK(r.monotone);
    REQUIRE(r.points.size() == 3);
    for (const LifespanPoint& pt : r.points) {
        CHECK(pt.status == RunStatus::blew_up);
        CHECK(pt.threshold_consistent);
        REQUIRE(pt.t_blow_half.has_value());
        CHECK(pt.dt_change <= 0.02);
    }
    CHECK(r.points[0].t_blow < r.points[1].t_blow);
    CHECK(r.points[1].t_blow < r.points[2].t_blow);
    CHECK(r.kappa_fit > 0.8);
    CHECK(r.kappa_fit < 1.6);
    CHECK(r.pass);

    SUBCASE("amplitude list validation") {
        LifespanSpec bad = spec;
        bad.eps = {0.1};
        CHECK_THROWS_AS(lifespan_suite(bad, 1), std::invalid_argument);
        bad.eps = {0.1, 0.2};
        CHECK_THROWS_AS(lifespan_suite(bad, 1), std::invalid_argument);
    }

    SUBCASE("powers without a finite blow-up exponent are rejected") {
        LifespanSpec bad = spec;
        bad.p = 4.0; // above 11/3: kappa undefined
        CHECK_THROWS_AS(lifespan_suite(bad, 1), std::invalid_argument);
    }
}

TEST_CASE("power scan splits into blow-up below and completion above") {
    DichotomySpec spec;
    spec.grid = Grid({256}, {64.0});
    spec.eps = 0.25;
    spec.t_max = 300.0;
    spec.p_grid = {3.8, 2.0, 4.5, 3.0}; // deliberately unsorted

    const DichotomyResult r = dichotomy_scan(spec, 1);
    CHECK(r.p_crit == doctest::Approx(11.0 / 3.0).epsilon(1e-14));
    REQUIRE(r.cells.size() == 4);
    for (std::size_t i = 1; i < r.cells.size(); ++i)
        CHECK(r.cells[i].p > r.cells[i - 1].p);

    CHECK(r.cells[0].status == RunStatus::blew_up);
    CHECK(r.cells[1].status == RunStatus::blew_up);
    CHECK(r.cells[2].status == RunStatus::completed);
    CHECK(r.cells[3].status == RunStatus::completed);
    CHECK(r.monotone_frontier);
    REQUIRE(r.transition.has_value());
    CHECK(r.transition->first == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(r.transition->second == doctest::Approx(3.8).epsilon(1e-15));
    CHECK(r.transition_contains_crit);

    SUBCASE("a scan that never completes reports no transition") {
        DichotomySpec all_blow = spec;
        all_blow.p_grid = {2.0, 3.0};
        const DichotomyResult rb = dichotomy_scan(all_blow, 1);
        CHECK(rb.monotone_frontier);
        CHECK_FALSE(rb.transition.has_value());
        CHECK_FALSE(rb.transition_contains_crit);
    }

    SUBCASE("an empty grid is rejected") {
        DichotomySpec bad = spec;
        bad.p_grid.clear();
        CHECK_THROWS_AS(dichotomy_scan(bad, 1), std::invalid_argument);
    }
}

TEST_CASE("interpolation probe is resolution-stable and exact at q = 2") {
    GnProbeSpec spec;
    spec.fields = 10;
    spec.band = 4;
    spec.n_coarse = 16;
    spec.n_fine = 32;

    const GnProbeResult r = gn_probe_suite(spec, 1);
    CHECK(r.max_coarse > 0.0);
    CHECK(r.max_fine > 0.0);
    CHECK(r.rel_change < 0.10);
    CHECK(r.stable);
    CHECK(r.q2_max_dev <= 1e-12);

    SUBCASE("identical seeds reproduce identical maxima") {
        const GnProbeResult again = gn_probe_suite(spec, 1);
        CHECK(again.max_coarse == r.max_coarse);
        CHECK(again.max_fine == r.max_fine);
        CHECK(again.q2_max_dev == r.q2_max_dev);
    }

    SUBCASE("parameter validation") {
        GnProbeSpec bad = spec;
        bad.gs = GradedStructure::isotropic(1, 1);
        CHECK_THROWS_AS(gn_probe_suite(bad, 1), std::invalid_argument);
        bad = spec;
        bad.fields = 0;
        CHECK_THROWS_AS(gn_probe_suite(bad, 1), std::invalid_argument);
        bad = spec;
        bad.n_fine = spec.n_coarse;
        CHECK_THROWS_AS(gn_probe_suite(bad, 1), std::invalid_argument);
        bad = spec;
        bad.band = 6; // 3 * 6 >= 16
        CHECK_THROWS_AS(gn_probe_suite(bad, 1), std::invalid_argument);
    }
}

TEST_CASE("halving the step shows the expected integrator orders") {
    const ConvergenceSpec spec;

    const ConvergenceResult r1 = self_convergence(spec, Scheme::etd1);
    CHECK(r1.err_coarse > r1.err_fine);
    CHECK(r1.err_fine > 0.0);
    CHECK(std::abs(r1.order - 1.0) <= 0.3);

    const ConvergenceResult r2 = self_convergence(spec, Scheme::etd2);
    CHECK(r2.err_coarse > r2.err_fine);
    CHECK(r2.err_fine > 0.0);
    CHECK(std::abs(r2.order - 2.0) <= 0.3);

    // the corrector buys real accuracy, not just an order label
    CHECK(r2.err_coarse < 0.25 * r1.err_coarse);
}
