// Command-line front end: dispatches single runs and experiment suites,
// manages timestamped output directories, and reports machine-readable
// results. Exit codes: 0 success, 1 check failure, 2 configuration error.

#include "rockwave/config.hpp"
#include "rockwave/output.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

using namespace rockwave;

namespace {

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string output_root;
    int jobs = 0;
    bool plot_data = false;
};

void add_common(CLI::App* sub, CommonOpts& opts, bool takes_jobs = true,
                bool short_config = true) {
    sub->add_option(short_config ? "-c,--config" : "--config", opts.config_path,
                    "sectioned key = value config file");
    sub->add_option("--set", opts.overrides,
                    "override a config entry as section.key=value (repeatable)");
    sub->add_option("-o,--output", opts.output_root,
                    "output root (default: $ROCKWAVE_OUTPUT_ROOT or ./runs)");
    if (takes_jobs)
        sub->add_option("-j,--jobs", opts.jobs, "worker threads (default: all cores)");
    sub->add_flag("--plot-data", opts.plot_data,
                  "also write plot.csv in long (series,x,y) format");
}

ConfigFile load_cfg(const CommonOpts& opts) {
    ConfigFile cfg = opts.config_path.empty()
                         ? ConfigFile::parse_text("")
                         : ConfigFile::parse_file(opts.config_path);
    for (const std::string& s : opts.overrides) cfg.set_override(s);
    return cfg;
}

std::string output_root(const CommonOpts& opts) {
    if (!opts.output_root.empty()) return opts.output_root;
    if (const char* env = std::getenv("ROCKWAVE_OUTPUT_ROOT"); env && *env)
        return env;
    return "runs";
}

int job_count(const CommonOpts& opts) {
    if (opts.jobs > 0) return opts.jobs;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

int cmd_classify(int q, int nu, double gamma, double s, double p) {
    const ExponentReport rep = classify(q, nu, gamma, s, p);
    std::cout << "Q = " << q << "  nu = " << nu << "  gamma = " << fmt(gamma)
              << "  s = " << fmt(s) << "  p = " << fmt(p) << "\n";
    std::cout << "p_Crit = " << fmt(rep.p_crit) << "\n";
    std::cout << "regime = " << regime_name(rep.regime) << "\n";
    std::cout << "gamma_tilde = " << fmt(rep.gamma_tilde) << "\n";
    std::cout << "global existence range: p "
              << (rep.lower_strict ? "> " : ">= ") << fmt(rep.global_lower);
    if (rep.global_upper) std::cout << ", p <= " << fmt(*rep.global_upper);
    std::cout << "\n";
    std::cout << "p inside global range: " << (rep.global_ok ? "yes" : "no") << "\n";
    if (rep.kappa)
        std::cout << "lifespan exponent kappa = " << fmt(*rep.kappa) << "\n";
    else
        std::cout << "lifespan exponent kappa: undefined here\n";
    std::cout << "linear decay slope -(s+gamma)/nu = " << fmt(-(s + gamma) / nu)
              << "\n";
    return 0;
}

int cmd_simulate(const CommonOpts& opts) {
    ConfigFile cfg = load_cfg(opts);
    const SimulationConfig sim = load_simulation(cfg);
    cfg.reject_unknown();

    const RunOutcome out = run(sim);
    const std::string dir = make_run_dir(output_root(opts), "simulate");
    write_series_csv(dir + "/series.csv", out.series);
    write_run_manifest(dir + "/manifest.json", sim, out);
    write_text_file(dir + "/config.cfg", simulation_to_text(sim));
    if (opts.plot_data) {
        std::vector<PlotRow> rows;
        for (const Sample& smp : out.series) {
            rows.push_back({"l2", smp.t, smp.l2});
            rows.push_back({"hs", smp.t, smp.hs});
            rows.push_back({"max_abs", smp.t, smp.max_abs});
            rows.push_back({"weighted_l2", smp.t, smp.weighted_l2});
            rows.push_back({"weighted_hs", smp.t, smp.weighted_hs});
        }
        write_plot_csv(dir + "/plot.csv", rows);
    }

    std::cout << "status = " << status_name(out.status) << "\n";
    std::cout << "t_end = " << fmt(out.t_end) << "  steps = " << out.steps
              << "  samples = " << out.series.size() << "\n";
    if (out.t_cross_low)
        std::cout << "amplitude crossed 1e6 at t = " << fmt(*out.t_cross_low)
                  << (out.threshold_consistent ? " (threshold-consistent)" : "")
                  << "\n";
    std::cout << "output: " << dir << "\n";
    return 0;
}

int cmd_decay(const CommonOpts& opts) {
    ConfigFile cfg = load_cfg(opts);
    const DecayOptions dopt = load_decay_options(cfg);

    std::vector<DecayCaseSpec> specs;
    if (cfg.has("experiment", "s") || cfg.has("experiment", "gamma")) {
        DecayCaseSpec one{load_structure(cfg), cfg.get_double("experiment", "s", 0.0),
                          cfg.get_double("experiment", "gamma", 0.5),
                          DataKind::position};
        const std::string kind = cfg.get_string("experiment", "kind", "position");
        if (kind == "velocity") one.kind = DataKind::velocity;
        else if (kind != "position")
            throw config_error("experiment.kind must be position or velocity");
        specs.push_back(std::move(one));
    } else {
        specs = decay_suite_default();
    }
    cfg.reject_unknown();

    std::vector<DecayCaseResult> results;
    for (const DecayCaseSpec& spec : specs)
        results.push_back(run_decay_case(spec, dopt.tolerance, dopt.t_min,
                                         dopt.t_max, dopt.samples));

    const std::string dir = make_run_dir(output_root(opts), "decay");
    write_decay_csv(dir + "/decay.csv", results);
    write_decay_manifest(dir + "/manifest.json", dopt, results);
    if (opts.plot_data) {
        std::vector<PlotRow> rows;
        for (const DecayCaseResult& r : results) {
            const std::string name = "s=" + fmt(r.s) + " gamma=" + fmt(r.gamma);
            for (std::size_t i = 0; i < r.curve.times.size(); ++i)
                rows.push_back({name, r.curve.times[i], r.curve.norms[i]});
        }
        write_plot_csv(dir + "/plot.csv", rows);
    }

    bool all = true;
    for (const DecayCaseResult& r : results) {
        std::cout << "s = " << fmt(r.s) << "  gamma = " << fmt(r.gamma)
                  << "  slope = " << fmt(r.check.fit.slope) << "  theory = "
                  << fmt(r.theory) << "  rel_gap = " << fmt(r.check.rel_gap)
                  << (r.check.pass ? "  [ok]" : "  [FAIL]") << "\n";
        all = all && r.check.pass;
    }
    std::cout << "output: " << dir << "\n";
    return all ? 0 : 1;
}

int cmd_lifespan(const CommonOpts& opts) {
    ConfigFile cfg = load_cfg(opts);
    const LifespanSpec spec = load_lifespan(cfg);
    cfg.reject_unknown();

    const LifespanResult res = lifespan_suite(spec, job_count(opts));
    const std::string dir = make_run_dir(output_root(opts), "lifespan");
    write_lifespan_csv(dir + "/lifespan.csv", res);
    write_lifespan_manifest(dir + "/manifest.json", spec, res);
    if (opts.plot_data) {
        std::vector<PlotRow> rows;
        for (const LifespanPoint& pt : res.points) {
            rows.push_back({"T_eps", pt.eps, pt.t_blow});
            if (pt.t_blow_half) rows.push_back({"T_eps_half", pt.eps, *pt.t_blow_half});
        }
        write_plot_csv(dir + "/plot.csv", rows);
    }

    for (const LifespanPoint& pt : res.points)
        std::cout << "eps = " << fmt(pt.eps) << "  status = "
                  << status_name(pt.status) << "  T = " << fmt(pt.t_blow)
                  << "  dt_change = " << fmt(pt.dt_change) << "\n";
    std::cout << "kappa_fit = " << fmt(res.kappa_fit) << "  theory = "
              << fmt(res.kappa_theory) << "  rel_gap = " << fmt(res.check.rel_gap)
              << "\n";
    std::cout << (res.pass ? "[ok]" : "[FAIL]") << "  output: " << dir << "\n";
    return res.pass ? 0 : 1;
}

int cmd_scan(const CommonOpts& opts) {
    ConfigFile cfg = load_cfg(opts);
    const DichotomySpec spec = load_dichotomy(cfg);
    cfg.reject_unknown();

    const DichotomyResult res = dichotomy_scan(spec, job_count(opts));
    const std::string dir = make_run_dir(output_root(opts), "scan");
    write_dichotomy_csv(dir + "/scan.csv", res);
    write_dichotomy_manifest(dir + "/manifest.json", spec, res);
    if (opts.plot_data) {
        std::vector<PlotRow> rows;
        for (const DichotomyCell& c : res.cells)
            rows.push_back({"t_end", c.p, c.t_end});
        write_plot_csv(dir + "/plot.csv", rows);
    }

    for (const DichotomyCell& c : res.cells)
        std::cout << "p = " << fmt(c.p) << "  status = " << status_name(c.status)
                  << "  t_end = " << fmt(c.t_end) << "\n";
    std::cout << "p_crit = " << fmt(res.p_crit) << "\n";
    if (res.transition)
        std::cout << "transition inside (" << fmt(res.transition->first) << ", "
                  << fmt(res.transition->second) << ")"
                  << (res.transition_contains_crit ? "  contains p_crit" : "")
                  << "\n";
    else
        std::cout << "no transition inside the scanned grid\n";
    const bool pass = res.monotone_frontier && res.transition_contains_crit;
    std::cout << (pass ? "[ok]" : "[FAIL]") << "  output: " << dir << "\n";
    return pass ? 0 : 1;
}

int cmd_testfn(const CommonOpts& opts) {
    ConfigFile cfg = load_cfg(opts);
    const TestfnSpec spec = load_testfn(cfg);
    const double tolerance = cfg.get_double("experiment", "tolerance", 0.05);
    cfg.reject_unknown();

    const TestfnResult res = testfn_scaling(spec);
    const std::string dir = make_run_dir(output_root(opts), "testfn");
    write_testfn_csv(dir + "/testfn.csv", res);
    write_testfn_manifest(dir + "/manifest.json", spec, res, tolerance);
    if (opts.plot_data) {
        std::vector<PlotRow> rows;
        for (std::size_t i = 0; i < res.radii.size(); ++i) {
            rows.push_back({"time", res.radii[i], res.time_integral[i]});
            rows.push_back({"op", res.radii[i], res.op_integral[i]});
            rows.push_back({"time2", res.radii[i], res.time2_integral[i]});
        }
        write_plot_csv(dir + "/plot.csv", rows);
    }

    const auto line = [&](const char* name, const FitResult& fit, double theory) {
        const bool ok = std::abs(fit.slope - theory) <= tolerance;
        std::cout << name << " slope = " << fmt(fit.slope) << "  theory = "
                  << fmt(theory) << (ok ? "  [ok]" : "  [FAIL]") << "\n";
        return ok;
    };
    bool all = line("time ", res.time_fit, res.theory_first);
    all = line("op   ", res.op_fit, res.theory_first) && all;
    all = line("time2", res.time2_fit, res.theory_second) && all;
    std::cout << "output: " << dir << "\n";
    return all ? 0 : 1;
}

int cmd_gn_probe(const CommonOpts& opts, std::uint64_t seed, bool seed_set) {
    ConfigFile cfg = load_cfg(opts);
    GnProbeSpec spec = load_gn_probe(cfg);
    cfg.reject_unknown();
    if (seed_set) spec.seed = seed;

    const GnProbeResult res = gn_probe_suite(spec, job_count(opts));
    const std::string dir = make_run_dir(output_root(opts), "gn-probe");
    write_gn_csv(dir + "/gn.csv", spec, res);
    write_gn_manifest(dir + "/manifest.json", spec, res);
    if (opts.plot_data)
        write_plot_csv(dir + "/plot.csv",
                       {{"max_ratio", double(spec.n_coarse), res.max_coarse},
                        {"max_ratio", double(spec.n_fine), res.max_fine}});

    std::cout << "max ratio: " << fmt(res.max_coarse) << " at n = " << spec.n_coarse
              << ", " << fmt(res.max_fine) << " at n = " << spec.n_fine
              << "  (rel change = " << fmt(res.rel_change) << ")\n";
    std::cout << "q = 2 worst |ratio - 1| = " << fmt(res.q2_max_dev) << "\n";
    const bool pass = res.stable && res.q2_max_dev <= 1e-12;
    std::cout << (pass ? "[ok]" : "[FAIL]") << "  output: " << dir << "\n";
    return pass ? 0 : 1;
}

int cmd_verify_kernels(const CommonOpts& opts, const RegimeCutoffs& cut,
                       double t_max, double beta_max, int grid_n, double s,
                       double gamma, int nu) {
    std::vector<double> t_grid(grid_n), beta_grid(grid_n);
    for (int i = 0; i < grid_n; ++i) {
        t_grid[i] = t_max * i / (grid_n - 1.0);
        beta_grid[i] = beta_max * i / (grid_n - 1.0);
    }
    const BoundsReport bounds = verify_pointwise_bounds(cut, t_grid, beta_grid);
    const UniformDecayReport stable = verify_uniform_decay(s, gamma, nu, cut.delta);
    const UniformDecayReport perturbed =
        verify_uniform_decay(s, gamma, nu, cut.delta, 1.0, 0.2);

    const std::string dir = make_run_dir(output_root(opts), "verify-kernels");
    write_kernel_csv(dir + "/margins.csv", bounds);
    write_kernel_manifest(dir + "/manifest.json", cut, bounds, stable, perturbed);
    if (opts.plot_data) {
        std::vector<PlotRow> rows;
        for (std::size_t i = 0; i < stable.horizons.size(); ++i)
            rows.push_back({"sup", stable.horizons[i], stable.sups[i]});
        for (std::size_t i = 0; i < perturbed.horizons.size(); ++i)
            rows.push_back({"sup_perturbed", perturbed.horizons[i], perturbed.sups[i]});
        write_plot_csv(dir + "/plot.csv", rows);
    }

    for (const RegimeMargin& m : bounds.margins) {
        const char* regime = m.regime == BetaRegime::small    ? "small"
                             : m.regime == BetaRegime::middle ? "middle"
                                                              : "large";
        std::cout << regime << " K" << m.kernel << ": C_min = " << fmt(m.c_min)
                  << " at (t = " << fmt(m.t_arg) << ", beta = " << fmt(m.beta_arg)
                  << ")\n";
    }
    if (bounds.feasible) {
        std::cout << "feasible at c = " << fmt(bounds.c_used) << "\n";
    } else {
        std::cout << "INFEASIBLE at c = " << fmt(bounds.c_used);
        if (bounds.offender)
            std::cout << " (witness: K" << bounds.offender->kernel << " at t = "
                      << fmt(bounds.offender->t_arg) << ", beta = "
                      << fmt(bounds.offender->beta_arg) << ")";
        std::cout << "\n";
    }
    std::cout << "weighted sup over horizons:";
    for (double v : stable.sups) std::cout << " " << fmt(v);
    std::cout << "  growth = " << fmt(stable.growth)
              << (stable.stabilized ? "  [stabilized]" : "  [GROWING]") << "\n";
    std::cout << "perturbed exponent growth = " << fmt(perturbed.growth)
              << (perturbed.stabilized ? "  [unexpectedly flat]" : "  [grows, as it must]")
              << "\n";
    const bool pass = bounds.feasible && stable.stabilized;
    std::cout << (pass ? "[ok]" : "[FAIL]") << "  output: " << dir << "\n";
    return pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral simulator and scaling-law harness for the damped "
                 "anisotropic wave model u_tt + Ru + u_t = |u|^p"};
    app.require_subcommand(1);
    int exit_code = 0;

    // classify
    int cl_q = 1, cl_nu = 2;
    double cl_gamma = 0.25, cl_s = 1.0, cl_p = 2.0;
    CLI::App* cl = app.add_subcommand(
        "classify", "evaluate the critical power and existence ranges");
    cl->add_option("--Q", cl_q, "homogeneous dimension")->required();
    cl->add_option("--nu", cl_nu, "operator degree")->required();
    cl->add_option("--gamma", cl_gamma, "data decay index, in (0, Q/2)")->required();
    cl->add_option("--p", cl_p, "nonlinearity power")->required();
    cl->add_option("--s", cl_s, "data regularity order");
    cl->callback([&] { exit_code = cmd_classify(cl_q, cl_nu, cl_gamma, cl_s, cl_p); });

    // simulate
    CommonOpts sim_opts;
    CLI::App* sim = app.add_subcommand("simulate", "run one configured trajectory");
    add_common(sim, sim_opts, false);
    sim->callback([&] { exit_code = cmd_simulate(sim_opts); });

    // decay
    CommonOpts dec_opts;
    CLI::App* dec = app.add_subcommand(
        "decay", "fit linear decay rates against the quadrature oracle");
    add_common(dec, dec_opts, false);
    dec->callback([&] { exit_code = cmd_decay(dec_opts); });

    // lifespan
    CommonOpts life_opts;
    CLI::App* life = app.add_subcommand(
        "lifespan", "fit blow-up time against data amplitude");
    add_common(life, life_opts);
    life->callback([&] { exit_code = cmd_lifespan(life_opts); });

    // scan
    CommonOpts scan_opts;
    CLI::App* scan = app.add_subcommand(
        "scan", "blow-up versus completion across a power grid");
    add_common(scan, scan_opts);
    scan->callback([&] { exit_code = cmd_scan(scan_opts); });

    // testfn
    CommonOpts tf_opts;
    CLI::App* tf = app.add_subcommand(
        "testfn", "rescaled test-function integrals and their slopes");
    add_common(tf, tf_opts, false);
    tf->callback([&] { exit_code = cmd_testfn(tf_opts); });

    // gn-probe
    CommonOpts gn_opts;
    std::uint64_t gn_seed = 0;
    CLI::App* gn = app.add_subcommand(
        "gn-probe", "interpolation-inequality ratios over random fields");
    add_common(gn, gn_opts);
    CLI::Option* seed_opt = gn->add_option("--seed", gn_seed, "probe RNG seed");
    gn->callback([&] {
        exit_code = cmd_gn_probe(gn_opts, gn_seed, seed_opt->count() > 0);
    });

    // verify-kernels
    CommonOpts vk_opts;
    RegimeCutoffs cut;
    double vk_tmax = 100.0, vk_bmax = 100.0, vk_s = 0.0, vk_gamma = 0.5;
    int vk_n = 500, vk_nu = 2;
    CLI::App* vk = app.add_subcommand(
        "verify-kernels", "certify pointwise kernel bounds and weighted sups");
    add_common(vk, vk_opts, false, false);
    vk->add_option("--delta", cut.delta, "small-frequency cutoff");
    vk->add_option("--N", cut.big_n, "large-frequency cutoff");
    vk->add_option("--c", cut.c, "decay rate in the bound shapes");
    vk->add_option("--t-max", vk_tmax, "time grid upper end");
    vk->add_option("--beta-max", vk_bmax, "frequency grid upper end");
    vk->add_option("--grid-n", vk_n, "grid points per axis")
        ->check(CLI::Range(2, 100000));
    vk->add_option("--s", vk_s, "regularity order for the weighted sup");
    vk->add_option("--gamma", vk_gamma, "decay index for the weighted sup");
    vk->add_option("--nu", vk_nu, "operator degree for the weighted sup");
    vk->callback([&] {
        exit_code = cmd_verify_kernels(vk_opts, cut, vk_tmax, vk_bmax, vk_n, vk_s,
                                       vk_gamma, vk_nu);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}
