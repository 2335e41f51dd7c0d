#pragma once

#include "rockwave/evolution.hpp"
#include "rockwave/experiments.hpp"
#include "rockwave/testfn.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rockwave {

/// Any configuration problem; the command line maps this to exit code 2.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Sectioned key = value file. Every getter marks its key consumed; after a
/// loader has pulled everything it understands, reject_unknown() turns each
/// leftover key into an error naming its line, so typos never pass silently.
class ConfigFile {
public:
    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_text(const std::string& text,
                                 const std::string& origin = "<inline>");

    /// Apply a "section.key=value" override on top of the file contents.
    void set_override(const std::string& dotted_assignment);

    bool has(const std::string& section, const std::string& key) const;

    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key,
                      double fallback) const;
    int get_int(const std::string& section, const std::string& key,
                int fallback) const;
    bool get_bool(const std::string& section, const std::string& key,
                  bool fallback) const;
    std::vector<double> get_double_list(const std::string& section,
                                        const std::string& key,
                                        const std::vector<double>& fallback) const;
    std::vector<int> get_int_list(const std::string& section, const std::string& key,
                                  const std::vector<int>& fallback) const;

    /// Throws when any stored key was never consumed by a getter.
    void reject_unknown() const;

    const std::string& origin() const { return origin_; }

private:
    struct Entry {
        std::string value;
        int line;
        mutable bool consumed = false;
    };

    const Entry* find(const std::string& section, const std::string& key) const;
    void insert(const std::string& section, const std::string& key,
                const std::string& value, int line);

    std::map<std::pair<std::string, std::string>, Entry> entries_;
    std::string origin_;
};

const char* scheme_name(Scheme scheme);
Scheme parse_scheme(const std::string& name);
const char* bump_name(BumpKind kind);
BumpKind parse_bump(const std::string& name);
const char* status_name(RunStatus status);

// Section loaders. Each starts from the calibrated defaults and overlays the
// file's values; validation failures surface as config_error.
GradedStructure load_structure(const ConfigFile& cfg);
Grid load_grid(const ConfigFile& cfg, int rank);
SimulationConfig load_simulation(const ConfigFile& cfg);
LifespanSpec load_lifespan(const ConfigFile& cfg);
DichotomySpec load_dichotomy(const ConfigFile& cfg);
GnProbeSpec load_gn_probe(const ConfigFile& cfg);
TestfnSpec load_testfn(const ConfigFile& cfg);

struct DecayOptions {
    double tolerance = 0.05;
    double t_min = 1e2;
    double t_max = 1e4;
    int samples = 30;
};
DecayOptions load_decay_options(const ConfigFile& cfg);

/// Emit text that load_simulation parses back to the identical configuration.
std::string simulation_to_text(const SimulationConfig& cfg);

} // namespace rockwave
