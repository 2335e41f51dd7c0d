#pragma once

#include "rockwave/config.hpp"
#include "rockwave/oscillator.hpp"

#include <string>
#include <vector>

namespace rockwave {

/// Shortest decimal form that parses back to the same double.
std::string format_g17(double v);

/// Create root/prefix-YYYYMMDD-HHMMSS (suffixed -2, -3, ... on collision)
/// and return its path. The timestamp lives only in the directory name;
/// everything written inside is byte-stable across reruns.
std::string make_run_dir(const std::string& root, const std::string& prefix);

void write_text_file(const std::string& path, const std::string& content);

/// Columns: t, l2, hs, max_abs, weighted_l2, weighted_hs.
void write_series_csv(const std::string& path, const std::vector<Sample>& series);

/// Sidecar with the reparseable config echo and the outcome summary.
void write_run_manifest(const std::string& path, const SimulationConfig& cfg,
                        const RunOutcome& outcome);

/// Tidy long format, one row per time sample per case:
/// t, norm, s, gamma, predicted_slope, fitted_slope.
void write_decay_csv(const std::string& path,
                     const std::vector<DecayCaseResult>& results);
void write_decay_manifest(const std::string& path, const DecayOptions& options,
                          const std::vector<DecayCaseResult>& results);

void write_lifespan_csv(const std::string& path, const LifespanResult& result);
void write_lifespan_manifest(const std::string& path, const LifespanSpec& spec,
                             const LifespanResult& result);

void write_dichotomy_csv(const std::string& path, const DichotomyResult& result);
void write_dichotomy_manifest(const std::string& path, const DichotomySpec& spec,
                              const DichotomyResult& result);

void write_testfn_csv(const std::string& path, const TestfnResult& result);
void write_testfn_manifest(const std::string& path, const TestfnSpec& spec,
                           const TestfnResult& result, double tolerance = 0.05);

void write_gn_csv(const std::string& path, const GnProbeSpec& spec,
                  const GnProbeResult& result);
void write_gn_manifest(const std::string& path, const GnProbeSpec& spec,
                       const GnProbeResult& result, double q2_tolerance = 1e-12);

/// Long-format plotting rows: series, x, y.
struct PlotRow {
    std::string series;
    double x, y;
};
void write_plot_csv(const std::string& path, const std::vector<PlotRow>& rows);

void write_kernel_csv(const std::string& path, const BoundsReport& bounds);
void write_kernel_manifest(const std::string& path, const RegimeCutoffs& cutoffs,
                           const BoundsReport& bounds,
                           const UniformDecayReport& stable,
                           const UniformDecayReport& perturbed);

} // namespace rockwave
