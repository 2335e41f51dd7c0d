#pragma once

#include "rockwave/graded.hpp"
#include "rockwave/spectral.hpp"

#include <optional>
#include <vector>

namespace rockwave {

enum class Scheme { etd1, etd2 };

/// Nonlinear run setup: u_tt + Ru + u_t = |u|^p on the periodic box, with
/// data epsilon * c1 * <x>^{-(Q/2+gamma)} / log(e+|x|) on both u and u_t.
struct SimulationConfig {
    SimulationConfig(GradedStructure gs_, Grid grid_)
        : gs(std::move(gs_)), grid(std::move(grid_)) {}

    GradedStructure gs;
    Grid grid;
    double gamma = 0.25;
    double epsilon = 0.1;
    double c1 = 1.0;
    double p = 2.0;
    double dt = 0.05;
    double t_max = 100.0;
    Scheme scheme = Scheme::etd2;
    bool dealias = true;
    double blowup_threshold = 1e8;
    int snapshot_stride = 20;     ///< record every k-th step
    double s_diag = 1.0;          ///< order of the recorded Sobolev norm

    void validate() const;
};

enum class RunStatus { completed, blew_up, stagnated };

struct Sample {
    double t;
    double l2, hs, max_abs;
    double weighted_l2, weighted_hs;  ///< (1+t)^{gamma/nu} and (1+t)^{(s+gamma)/nu} weights
};

struct RunOutcome {
    RunStatus status;
    double t_end;                     ///< blow-up time or the reached horizon
    std::optional<SimulationConfig> config;  ///< echo of the launching config
    std::vector<Sample> series;
    std::optional<double> t_cross_low;   ///< first crossing of 1e6
    std::optional<double> t_cross_high;  ///< first crossing of 1e8
    bool threshold_consistent;           ///< the two crossings agree within 3 percent
    std::size_t steps;
    double wall_seconds;
};

/// Blow-up data shape evaluated on the grid (anisotropic quasi-norm inside).
std::vector<double> build_initial_data(const Grid& g, const GradedStructure& gs,
                                       double gamma, double c1, double epsilon);

/// One trajectory's worth of precomputed mode tables and scratch buffers.
/// Exposed so tests can drive single modes and custom states directly.
class Stepper {
public:
    Stepper(const GradedStructure& gs, const Grid& grid, double p, double dt,
            Scheme scheme, bool dealias);

    void set_state(std::vector<cplx> uhat, std::vector<cplx> vhat);
    const std::vector<cplx>& uhat() const { return uhat_; }
    const std::vector<cplx>& vhat() const { return vhat_; }

    /// Advance one step; `nonlinear = false` freezes the forcing at zero.
    /// Returns max |u| of the physical field entering the step.
    double step(bool nonlinear = true);

    const Grid& grid() const { return grid_; }
    const std::vector<double>& symbol() const { return symbol_; }

private:
    Grid grid_;
    double p_, dt_;
    Scheme scheme_;
    bool dealias_;
    Fft fft_;
    std::vector<double> symbol_, beta_;
    std::vector<double> k0_, k1_, j1_, j2w_;   // per-mode kernel tables for dt
    std::vector<std::uint8_t> mask_;
    std::vector<cplx> uhat_, vhat_, nhat_, nhat2_, u2_, v2_;
    std::vector<double> upow_;

    void nonlinear_hat(const std::vector<cplx>& uh, std::vector<cplx>& out, double& maxabs);
};

/// Run the configured problem to its horizon, a blow-up, or stagnation.
RunOutcome run(const SimulationConfig& cfg);

} // namespace rockwave
