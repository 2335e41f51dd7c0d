#include "rockwave/output.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace rockwave {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string make_run_dir(const std::string& root, const std::string& prefix) {
    std::error_code ec;
    fs::create_directories(root, ec);
    if (ec) throw config_error("cannot create output root '" + root + "': " + ec.message());

    const std::time_t now = std::chrono::system_clock::to_time_t(
        std::chrono::system_clock::now());
    std::tm tm{};
    localtime_r(&now, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y%m%d-%H%M%S", &tm);

    const std::string base = (fs::path(root) / (prefix + "-" + stamp)).string();
    std::string dir = base;
    for (int k = 2; fs::exists(dir); ++k) dir = base + "-" + std::to_string(k);
    fs::create_directory(dir, ec);
    if (ec) throw config_error("cannot create run directory '" + dir + "': " + ec.message());
    return dir;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw config_error("write to '" + path + "' failed");
}

namespace {

void write_json_file(const std::string& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

json config_json(const SimulationConfig& cfg) {
    json j;
    j["structure"] = {{"weights", cfg.gs.weights()},
                      {"coeffs", cfg.gs.coeffs()},
                      {"nu0", cfg.gs.nu0()}};
    j["grid"] = {{"points", cfg.grid.dims}, {"box", cfg.grid.box}};
    j["data"] = {{"gamma", cfg.gamma}, {"epsilon", cfg.epsilon}, {"c1", cfg.c1}};
    j["stepper"] = {{"p", cfg.p},
                    {"dt", cfg.dt},
                    {"t_max", cfg.t_max},
                    {"scheme", scheme_name(cfg.scheme)},
                    {"dealias", cfg.dealias},
                    {"blowup_threshold", cfg.blowup_threshold},
                    {"snapshot_stride", cfg.snapshot_stride},
                    {"s_diag", cfg.s_diag}};
    return j;
}

json structure_json(const GradedStructure& gs) {
    return {{"weights", gs.weights()}, {"coeffs", gs.coeffs()}, {"nu0", gs.nu0()}};
}

json fit_json(const FitResult& fit) {
    return {{"slope", fit.slope},
            {"intercept", fit.intercept},
            {"max_residual", fit.max_residual},
            {"r_squared", fit.r_squared},
            {"samples", fit.samples}};
}

json check_json(const SlopeCheck& check) {
    json j = fit_json(check.fit);
    j["theory"] = check.theory;
    j["rel_gap"] = check.rel_gap;
    j["pass"] = check.pass;
    return j;
}

const char* membership_name(Membership m) {
    switch (m) {
    case Membership::convergent: return "convergent";
    case Membership::log_divergent: return "log_divergent";
    case Membership::divergent: return "divergent";
    }
    return "unknown";
}

const char* regime_name(BetaRegime r) {
    switch (r) {
    case BetaRegime::small: return "small";
    case BetaRegime::middle: return "middle";
    case BetaRegime::large: return "large";
    }
    return "unknown";
}

json margin_json(const RegimeMargin& m) {
    return {{"regime", regime_name(m.regime)},
            {"kernel", m.kernel},
            {"c_min", m.c_min},
            {"t_arg", m.t_arg},
            {"beta_arg", m.beta_arg},
            {"t_interior", m.t_interior}};
}

json decay_report_json(const UniformDecayReport& rep) {
    return {{"horizons", rep.horizons},
            {"sups", rep.sups},
            {"growth", rep.growth},
            {"stabilized", rep.stabilized}};
}

} // namespace

void write_series_csv(const std::string& path, const std::vector<Sample>& series) {
    std::ostringstream os;
    os << "t,l2,hs,max_abs,weighted_l2,weighted_hs\n";
    for (const Sample& s : series)
        os << format_g17(s.t) << ',' << format_g17(s.l2) << ',' << format_g17(s.hs)
           << ',' << format_g17(s.max_abs) << ',' << format_g17(s.weighted_l2)
           << ',' << format_g17(s.weighted_hs) << '\n';
    write_text_file(path, os.str());
}

void write_run_manifest(const std::string& path, const SimulationConfig& cfg,
                        const RunOutcome& outcome) {
    json j;
    j["kind"] = "simulate";
    j["config"] = config_json(cfg);
    j["config_text"] = simulation_to_text(cfg);
    json& o = j["outcome"];
    o["status"] = status_name(outcome.status);
    o["t_end"] = outcome.t_end;
    o["steps"] = outcome.steps;
    o["samples"] = outcome.series.size();
    o["t_cross_low"] =
        outcome.t_cross_low ? json(*outcome.t_cross_low) : json(nullptr);
    o["t_cross_high"] =
        outcome.t_cross_high ? json(*outcome.t_cross_high) : json(nullptr);
    o["threshold_consistent"] = outcome.threshold_consistent;
    write_json_file(path, j);
}

void write_decay_csv(const std::string& path,
                     const std::vector<DecayCaseResult>& results) {
    std::ostringstream os;
    os << "t,norm,s,gamma,predicted_slope,fitted_slope\n";
    for (const DecayCaseResult& r : results)
        for (std::size_t i = 0; i < r.curve.times.size(); ++i)
            os << format_g17(r.curve.times[i]) << ',' << format_g17(r.curve.norms[i])
               << ',' << format_g17(r.s) << ',' << format_g17(r.gamma) << ','
               << format_g17(r.theory) << ',' << format_g17(r.check.fit.slope)
               << '\n';
    write_text_file(path, os.str());
}

void write_decay_manifest(const std::string& path, const DecayOptions& options,
                          const std::vector<DecayCaseResult>& results) {
    json j;
    j["kind"] = "decay";
    j["options"] = {{"tolerance", options.tolerance},
                    {"t_min", options.t_min},
                    {"t_max", options.t_max},
                    {"samples", options.samples}};
    bool all = true;
    json cases = json::array();
    for (const DecayCaseResult& r : results) {
        json c;
        c["s"] = r.s;
        c["gamma"] = r.gamma;
        c["membership"] = membership_name(r.membership);
        c["check"] = check_json(r.check);
        cases.push_back(std::move(c));
        all = all && r.check.pass;
    }
    j["cases"] = std::move(cases);
    j["pass"] = all;
    write_json_file(path, j);
}

void write_lifespan_csv(const std::string& path, const LifespanResult& result) {
    std::ostringstream os;
    os << "eps,status,t_blow,t_blow_half,dt_change,threshold_consistent\n";
    for (const LifespanPoint& pt : result.points) {
        os << format_g17(pt.eps) << ',' << status_name(pt.status) << ','
           << format_g17(pt.t_blow) << ',';
        if (pt.t_blow_half) os << format_g17(*pt.t_blow_half);
        os << ',' << format_g17(pt.dt_change) << ','
           << (pt.threshold_consistent ? "true" : "false") << '\n';
    }
    write_text_file(path, os.str());
}

void write_lifespan_manifest(const std::string& path, const LifespanSpec& spec,
                             const LifespanResult& result) {
    json j;
    j["kind"] = "lifespan";
    j["spec"] = {{"structure", structure_json(spec.gs)},
                 {"grid", {{"points", spec.grid.dims}, {"box", spec.grid.box}}},
                 {"gamma", spec.gamma},
                 {"p", spec.p},
                 {"c1", spec.c1},
                 {"dt", spec.dt},
                 {"t_max", spec.t_max},
                 {"eps", spec.eps},
                 {"scheme", scheme_name(spec.scheme)},
                 {"halve_dt", spec.halve_dt},
                 {"tolerance", spec.tolerance}};
    json& r = j["results"];
    r["kappa_theory"] = result.kappa_theory;
    r["kappa_fit"] = result.kappa_fit;
    r["check"] = check_json(result.check);
    r["all_blew_up"] = result.all_blew_up;
    r["monotone"] = result.monotone;
    r["max_dt_change"] = result.max_dt_change;
    json points = json::array();
    for (const LifespanPoint& pt : result.points) {
        json q = {{"eps", pt.eps},
                  {"status", status_name(pt.status)},
                  {"t_blow", pt.t_blow},
                  {"dt_change", pt.dt_change},
                  {"threshold_consistent", pt.threshold_consistent}};
        q["t_blow_half"] = pt.t_blow_half ? json(*pt.t_blow_half) : json(nullptr);
        points.push_back(std::move(q));
    }
    r["points"] = std::move(points);
    j["pass"] = result.pass;
    write_json_file(path, j);
}

void write_dichotomy_csv(const std::string& path, const DichotomyResult& result) {
    std::ostringstream os;
    os << "p,status,t_end\n";
    for (const DichotomyCell& c : result.cells)
        os << format_g17(c.p) << ',' << status_name(c.status) << ','
           << format_g17(c.t_end) << '\n';
    write_text_file(path, os.str());
}

void write_dichotomy_manifest(const std::string& path, const DichotomySpec& spec,
                              const DichotomyResult& result) {
    json j;
    j["kind"] = "scan";
    j["spec"] = {{"structure", structure_json(spec.gs)},
                 {"grid", {{"points", spec.grid.dims}, {"box", spec.grid.box}}},
                 {"gamma", spec.gamma},
                 {"epsilon", spec.eps},
                 {"c1", spec.c1},
                 {"dt", spec.dt},
                 {"t_max", spec.t_max},
                 {"p_grid", spec.p_grid},
                 {"scheme", scheme_name(spec.scheme)}};
    json& r = j["results"];
    r["p_crit"] = result.p_crit;
    json cells = json::array();
    for (const DichotomyCell& c : result.cells)
        cells.push_back({{"p", c.p},
                         {"status", status_name(c.status)},
                         {"t_end", c.t_end}});
    r["cells"] = std::move(cells);
    r["monotone_frontier"] = result.monotone_frontier;
    r["transition"] = result.transition
                          ? json({result.transition->first, result.transition->second})
                          : json(nullptr);
    r["transition_contains_crit"] = result.transition_contains_crit;
    j["pass"] = result.monotone_frontier && result.transition_contains_crit;
    write_json_file(path, j);
}

void write_testfn_csv(const std::string& path, const TestfnResult& result) {
    std::ostringstream os;
    os << "radius,time_integral,op_integral,time2_integral\n";
    for (std::size_t i = 0; i < result.radii.size(); ++i)
        os << format_g17(result.radii[i]) << ',' << format_g17(result.time_integral[i])
           << ',' << format_g17(result.op_integral[i]) << ','
           << format_g17(result.time2_integral[i]) << '\n';
    write_text_file(path, os.str());
}

void write_testfn_manifest(const std::string& path, const TestfnSpec& spec,
                           const TestfnResult& result, double tolerance) {
    json j;
    j["kind"] = "testfn";
    j["spec"] = {{"structure", structure_json(spec.gs)},
                 {"p", spec.p},
                 {"radii", spec.radii},
                 {"bump", bump_name(spec.bump)},
                 {"grid_points", spec.grid_points},
                 {"box_factor", spec.box_factor},
                 {"phi_floor", spec.phi_floor}};
    const auto slope_block = [&](const FitResult& fit, double theory) {
        json b = fit_json(fit);
        b["theory"] = theory;
        b["abs_gap"] = std::abs(fit.slope - theory);
        b["pass"] = std::abs(fit.slope - theory) <= tolerance;
        return b;
    };
    json& r = j["results"];
    r["tolerance"] = tolerance;
    r["time"] = slope_block(result.time_fit, result.theory_first);
    r["op"] = slope_block(result.op_fit, result.theory_first);
    r["time2"] = slope_block(result.time2_fit, result.theory_second);
    j["pass"] = r["time"]["pass"].get<bool>() && r["op"]["pass"].get<bool>() &&
                r["time2"]["pass"].get<bool>();
    write_json_file(path, j);
}

void write_gn_csv(const std::string& path, const GnProbeSpec& spec,
                  const GnProbeResult& result) {
    std::ostringstream os;
    os << "resolution,max_ratio\n";
    os << spec.n_coarse << ',' << format_g17(result.max_coarse) << '\n';
    os << spec.n_fine << ',' << format_g17(result.max_fine) << '\n';
    write_text_file(path, os.str());
}

void write_gn_manifest(const std::string& path, const GnProbeSpec& spec,
                       const GnProbeResult& result, double q2_tolerance) {
    json j;
    j["kind"] = "gn_probe";
    j["spec"] = {{"structure", structure_json(spec.gs)},
                 {"s", spec.s},
                 {"q", spec.q},
                 {"band", spec.band},
                 {"fields", spec.fields},
                 {"seed", spec.seed},
                 {"n_coarse", spec.n_coarse},
                 {"n_fine", spec.n_fine},
                 {"box", spec.box_length}};
    json& r = j["results"];
    r["max_coarse"] = result.max_coarse;
    r["max_fine"] = result.max_fine;
    r["rel_change"] = result.rel_change;
    r["stable"] = result.stable;
    r["q2_max_dev"] = result.q2_max_dev;
    r["q2_tolerance"] = q2_tolerance;
    j["pass"] = result.stable && result.q2_max_dev <= q2_tolerance;
    write_json_file(path, j);
}

void write_plot_csv(const std::string& path, const std::vector<PlotRow>& rows) {
    std::ostringstream os;
    os << "series,x,y\n";
    for (const PlotRow& r : rows)
        os << r.series << ',' << format_g17(r.x) << ',' << format_g17(r.y) << '\n';
    write_text_file(path, os.str());
}

void write_kernel_csv(const std::string& path, const BoundsReport& bounds) {
    std::ostringstream os;
    os << "regime,kernel,c_min,t_arg,beta_arg,t_interior\n";
    for (const RegimeMargin& m : bounds.margins)
        os << regime_name(m.regime) << ',' << m.kernel << ',' << format_g17(m.c_min)
           << ',' << format_g17(m.t_arg) << ',' << format_g17(m.beta_arg) << ','
           << (m.t_interior ? "true" : "false") << '\n';
    write_text_file(path, os.str());
}

void write_kernel_manifest(const std::string& path, const RegimeCutoffs& cutoffs,
                           const BoundsReport& bounds,
                           const UniformDecayReport& stable,
                           const UniformDecayReport& perturbed) {
    json j;
    j["kind"] = "kernel_bounds";
    j["spec"] = {{"delta", cutoffs.delta}, {"N", cutoffs.big_n}, {"c", cutoffs.c}};
    json& r = j["results"];
    r["feasible"] = bounds.feasible;
    r["c_used"] = bounds.c_used;
    json margins = json::array();
    for (const RegimeMargin& m : bounds.margins) margins.push_back(margin_json(m));
    r["margins"] = std::move(margins);
    r["offender"] = bounds.offender ? margin_json(*bounds.offender) : json(nullptr);
    r["uniform_decay"] = decay_report_json(stable);
    r["uniform_decay_perturbed"] = decay_report_json(perturbed);
    j["pass"] = bounds.feasible && stable.stabilized;
    write_json_file(path, j);
}

} // namespace rockwave
