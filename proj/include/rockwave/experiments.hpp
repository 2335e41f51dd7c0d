#pragma once

#include "rockwave/evolution.hpp"
#include "rockwave/fit.hpp"
#include "rockwave/graded.hpp"
#include "rockwave/oracle.hpp"

#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

namespace rockwave {

/// Run `count` indexed jobs on up to `jobs` threads. Results must be stored
/// by index inside `fn`, so merged output never depends on scheduling.
void parallel_for_indexed(std::size_t count, int jobs,
                          const std::function<void(std::size_t)>& fn);

// ---------- linear decay-rate fits against the quadrature oracle ----------

struct DecayCaseSpec {
    GradedStructure gs;   ///< isotropic structures only (radial oracle path)
    double s;
    double gamma;
    DataKind kind = DataKind::position;
};

struct DecayCaseResult {
    double s, gamma;
    double theory;            ///< -(s+gamma)/nu
    Membership membership;    ///< of the boundary-matched profile used
    SlopeCheck check;
    DecayCurve curve;
};

/// The three benchmark configurations the acceptance gate pins down.
std::vector<DecayCaseSpec> decay_suite_default();

DecayCaseResult run_decay_case(const DecayCaseSpec& spec, double tolerance = 0.05,
                               double t_min = 1e2, double t_max = 1e4,
                               int samples = 30);

// ---------- lifespan scaling: blow-up time versus data amplitude ----------

struct LifespanSpec {
    LifespanSpec();   ///< the calibrated small-amplitude benchmark

    GradedStructure gs;
    Grid grid;
    double gamma, p, c1, dt, t_max;
    std::vector<double> eps;   ///< strictly decreasing, spanning >= a decade
    Scheme scheme;
    bool halve_dt;             ///< rerun each point at dt/2 and compare times
    double tolerance;          ///< allowed relative gap on the fitted exponent
};

struct LifespanPoint {
    double eps;
    RunStatus status;
    double t_blow;
    std::optional<double> t_blow_half;   ///< dt/2 rerun when requested
    double dt_change;                    ///< |T - T_half| / T, 0 when skipped
    bool threshold_consistent;
};

struct LifespanResult {
    std::vector<LifespanPoint> points;
    bool all_blew_up;
    bool monotone;         ///< T strictly increases as eps decreases
    double kappa_theory;
    double kappa_fit;      ///< negated slope of log T against log eps
    FitResult fit;
    SlopeCheck check;
    double max_dt_change;
    bool pass;             ///< all of the above gates together
};

LifespanResult lifespan_suite(const LifespanSpec& spec, int jobs = 1);

// ---------- global-versus-blow-up scan across the power grid ----------

struct DichotomySpec {
    DichotomySpec();   ///< the calibrated scan straddling the threshold power

    GradedStructure gs;
    Grid grid;
    double gamma, eps, c1, dt, t_max;
    std::vector<double> p_grid;
    Scheme scheme;
};

struct DichotomyCell {
    double p;
    RunStatus status;
    double t_end;
};

struct DichotomyResult {
    std::vector<DichotomyCell> cells;   ///< sorted by p
    double p_crit;
    bool monotone_frontier;   ///< blow-ups below, completions above, no mixing
    std::optional<std::pair<double, double>> transition;  ///< bracketing cell
    bool transition_contains_crit;
};

DichotomyResult dichotomy_scan(const DichotomySpec& spec, int jobs = 1);

// ---------- interpolation-inequality probe over random fields ----------

struct GnProbeSpec {
    GradedStructure gs = GradedStructure::isotropic(2, 1);
    double s = 1.0;
    double q = 4.0;
    int band = 8;              ///< largest mode index per axis
    int fields = 100;
    std::uint64_t seed = 12345;
    int n_coarse = 32, n_fine = 64;
    double box_length = 2.0 * std::numbers::pi;
};

struct GnProbeResult {
    double max_coarse, max_fine;
    double rel_change;
    bool stable;          ///< change under refinement below 10 percent
    double q2_max_dev;    ///< worst |ratio - 1| at q = 2 over the same fields
};

GnProbeResult gn_probe_suite(const GnProbeSpec& spec, int jobs = 1);

// ---------- derived run diagnostics ----------

/// Supremum over recorded samples of
/// (1+t)^{gamma/nu} ||u||_{L2} + (1+t)^{(s+gamma)/nu} ||u||_{Hs},
/// recomputed from the raw norm columns. For a blown-up outcome this is the
/// partial supremum up to the last recorded time.
double xs_norm(const RunOutcome& outcome, double s, double gamma, double nu);

struct ThresholdResult {
    double eps_complete;   ///< largest tested amplitude that completed
    double eps_blow;       ///< smallest tested amplitude that blew up (inf if none)
    int runs;
};

/// Bisect in log amplitude for the completion boundary of a configuration,
/// shrinking the bracket until eps_blow / eps_complete <= ratio. The run at
/// eps_lo must complete or the search is rejected.
ThresholdResult find_completion_threshold(const SimulationConfig& base,
                                          double eps_lo, double eps_hi,
                                          double ratio = 2.0);

// ---------- step-size self-convergence ----------

struct ConvergenceSpec {
    ConvergenceSpec();   ///< calibrated smooth nonlinear benchmark

    GradedStructure gs;
    Grid grid;
    double gamma, epsilon, c1, p, t_final, dt_coarse;
    bool dealias;
};

struct ConvergenceResult {
    double err_coarse;   ///< L2 gap between the dt and dt/2 solutions
    double err_fine;     ///< L2 gap between the dt/2 and dt/4 solutions
    double order;        ///< log2(err_coarse / err_fine)
};

ConvergenceResult self_convergence(const ConvergenceSpec& spec, Scheme scheme);

} // namespace rockwave
