#include "rockwave/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rockwave {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

bool valid_section(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!(std::islower(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

bool valid_key(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& what) {
    std::ostringstream os;
    os << origin << ":" << line << ": " << what;
    throw config_error(os.str());
}

double parse_double_or_fail(const std::string& text, const std::string& origin,
                            int line, const std::string& where) {
    const std::string t = trim(text);
    double out = 0.0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    const auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc{} || res.ptr != last)
        fail(origin, line, "expected a number for " + where + ", got '" + t + "'");
    return out;
}

int parse_int_or_fail(const std::string& text, const std::string& origin, int line,
                      const std::string& where) {
    const std::string t = trim(text);
    int out = 0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    const auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc{} || res.ptr != last)
        fail(origin, line, "expected an integer for " + where + ", got '" + t + "'");
    return out;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream is(text);
    while (std::getline(is, cur, ',')) parts.push_back(trim(cur));
    return parts;
}

} // namespace

ConfigFile ConfigFile::parse_text(const std::string& text, const std::string& origin) {
    ConfigFile cfg;
    cfg.origin_ = origin;
    std::istringstream is(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string s = trim(raw);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail(origin, line, "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (!valid_section(section))
                fail(origin, line, "bad section name '" + section + "'");
            continue;
        }
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos) fail(origin, line, "expected key = value");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (!valid_key(key)) fail(origin, line, "bad key name '" + key + "'");
        if (value.empty()) fail(origin, line, "empty value for '" + key + "'");
        if (section.empty()) fail(origin, line, "key '" + key + "' before any [section]");
        const auto it = cfg.entries_.find({section, key});
        if (it != cfg.entries_.end())
            fail(origin, line,
                 "duplicate key '" + section + "." + key + "' (first at line " +
                     std::to_string(it->second.line) + ")");
        cfg.insert(section, key, value, line);
    }
    return cfg;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str(), path);
}

void ConfigFile::set_override(const std::string& dotted_assignment) {
    const std::size_t eq = dotted_assignment.find('=');
    if (eq == std::string::npos)
        throw config_error("override '" + dotted_assignment +
                           "' must look like section.key=value");
    const std::string lhs = trim(dotted_assignment.substr(0, eq));
    const std::string value = trim(dotted_assignment.substr(eq + 1));
    const std::size_t dot = lhs.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == lhs.size())
        throw config_error("override '" + dotted_assignment +
                           "' must look like section.key=value");
    const std::string section = lhs.substr(0, dot);
    const std::string key = lhs.substr(dot + 1);
    if (!valid_section(section) || !valid_key(key))
        throw config_error("override '" + dotted_assignment + "' has a bad name");
    if (value.empty())
        throw config_error("override '" + dotted_assignment + "' has an empty value");
    entries_[{section, key}] = Entry{value, 0, false};
}

void ConfigFile::insert(const std::string& section, const std::string& key,
                        const std::string& value, int line) {
    entries_[{section, key}] = Entry{value, line, false};
}

const ConfigFile::Entry* ConfigFile::find(const std::string& section,
                                          const std::string& key) const {
    const auto it = entries_.find({section, key});
    if (it == entries_.end()) return nullptr;
    it->second.consumed = true;
    return &it->second;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    return entries_.count({section, key}) != 0;
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key,
                                   const std::string& fallback) const {
    const Entry* e = find(section, key);
    return e ? e->value : fallback;
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
    const Entry* e = find(section, key);
    if (!e) return fallback;
    return parse_double_or_fail(e->value, origin_, e->line, section + "." + key);
}

int ConfigFile::get_int(const std::string& section, const std::string& key,
                        int fallback) const {
    const Entry* e = find(section, key);
    if (!e) return fallback;
    return parse_int_or_fail(e->value, origin_, e->line, section + "." + key);
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key,
                          bool fallback) const {
    const Entry* e = find(section, key);
    if (!e) return fallback;
    const std::string v = e->value;
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    fail(origin_, e->line, "expected a boolean for " + section + "." + key +
                               ", got '" + v + "'");
}

std::vector<double> ConfigFile::get_double_list(
    const std::string& section, const std::string& key,
    const std::vector<double>& fallback) const {
    const Entry* e = find(section, key);
    if (!e) return fallback;
    std::vector<double> out;
    for (const std::string& part : split_list(e->value))
        out.push_back(parse_double_or_fail(part, origin_, e->line,
                                           section + "." + key));
    if (out.empty())
        fail(origin_, e->line, "empty list for " + section + "." + key);
    return out;
}

std::vector<int> ConfigFile::get_int_list(const std::string& section,
                                          const std::string& key,
                                          const std::vector<int>& fallback) const {
    const Entry* e = find(section, key);
    if (!e) return fallback;
    std::vector<int> out;
    for (const std::string& part : split_list(e->value))
        out.push_back(parse_int_or_fail(part, origin_, e->line, section + "." + key));
    if (out.empty())
        fail(origin_, e->line, "empty list for " + section + "." + key);
    return out;
}

void ConfigFile::reject_unknown() const {
    std::ostringstream os;
    int count = 0;
    for (const auto& [name, entry] : entries_) {
        if (entry.consumed) continue;
        if (count++) os << "; ";
        os << "unknown key " << name.first << "." << name.second;
        if (entry.line > 0) os << " (line " << entry.line << ")";
        else os << " (from --set)";
    }
    if (count) throw config_error(origin_ + ": " + os.str());
}

// ---------- enum names ----------

const char* scheme_name(Scheme scheme) {
    return scheme == Scheme::etd1 ? "etd1" : "etd2";
}

Scheme parse_scheme(const std::string& name) {
    if (name == "etd1") return Scheme::etd1;
    if (name == "etd2") return Scheme::etd2;
    throw config_error("unknown scheme '" + name + "' (expected etd1 or etd2)");
}

const char* bump_name(BumpKind kind) {
    return kind == BumpKind::exp_inv ? "exp_inv" : "exp_inv_sq";
}

BumpKind parse_bump(const std::string& name) {
    if (name == "exp_inv") return BumpKind::exp_inv;
    if (name == "exp_inv_sq") return BumpKind::exp_inv_sq;
    throw config_error("unknown bump '" + name +
                       "' (expected exp_inv or exp_inv_sq)");
}

const char* status_name(RunStatus status) {
    switch (status) {
    case RunStatus::completed: return "completed";
    case RunStatus::blew_up: return "blew_up";
    case RunStatus::stagnated: return "stagnated";
    }
    return "unknown";
}

// ---------- section loaders ----------

GradedStructure load_structure(const ConfigFile& cfg) {
    const std::vector<int> weights = cfg.get_int_list("structure", "weights", {1});
    const std::vector<double> coeffs =
        cfg.get_double_list("structure", "coeffs",
                            std::vector<double>(weights.size(), 1.0));
    const int nu0 = cfg.get_int("structure", "nu0", 1);
    if (weights.size() != coeffs.size())
        throw config_error("structure: weights has " +
                           std::to_string(weights.size()) + " entries but coeffs has " +
                           std::to_string(coeffs.size()));
    try {
        return GradedStructure(weights, coeffs, nu0);
    } catch (const std::invalid_argument& e) {
        throw config_error(std::string("structure: ") + e.what());
    }
}

Grid load_grid(const ConfigFile& cfg, int rank) {
    std::vector<int> points = cfg.get_int_list("grid", "points", {4096});
    std::vector<double> box = cfg.get_double_list("grid", "box", {1024.0});
    if (points.size() == 1 && rank > 1) points.assign(rank, points[0]);
    if (box.size() == 1 && rank > 1) box.assign(rank, box[0]);
    if (static_cast<int>(points.size()) != rank)
        throw config_error("grid: points has " + std::to_string(points.size()) +
                           " entries for a rank-" + std::to_string(rank) +
                           " structure");
    if (static_cast<int>(box.size()) != rank)
        throw config_error("grid: box has " + std::to_string(box.size()) +
                           " entries for a rank-" + std::to_string(rank) +
                           " structure");
    try {
        return Grid(points, box);
    } catch (const std::invalid_argument& e) {
        throw config_error(std::string("grid: ") + e.what());
    }
}

SimulationConfig load_simulation(const ConfigFile& cfg) {
    GradedStructure gs = load_structure(cfg);
    Grid grid = load_grid(cfg, gs.rank());
    SimulationConfig sim(std::move(gs), std::move(grid));
    sim.gamma = cfg.get_double("data", "gamma", sim.gamma);
    sim.epsilon = cfg.get_double("data", "epsilon", 0.1);
    sim.c1 = cfg.get_double("data", "c1", sim.c1);
    sim.p = cfg.get_double("stepper", "p", sim.p);
    sim.dt = cfg.get_double("stepper", "dt", sim.dt);
    sim.t_max = cfg.get_double("stepper", "t_max", sim.t_max);
    sim.scheme = parse_scheme(cfg.get_string("stepper", "scheme", scheme_name(sim.scheme)));
    sim.dealias = cfg.get_bool("stepper", "dealias", sim.dealias);
    sim.blowup_threshold =
        cfg.get_double("stepper", "blowup_threshold", sim.blowup_threshold);
    sim.snapshot_stride = cfg.get_int("stepper", "snapshot_stride", sim.snapshot_stride);
    sim.s_diag = cfg.get_double("stepper", "s_diag", sim.s_diag);
    try {
        sim.validate();
    } catch (const std::invalid_argument& e) {
        throw config_error(std::string("simulation: ") + e.what());
    }
    return sim;
}

LifespanSpec load_lifespan(const ConfigFile& cfg) {
    LifespanSpec spec;
    spec.gs = load_structure(cfg);
    spec.grid = load_grid(cfg, spec.gs.rank());
    spec.gamma = cfg.get_double("data", "gamma", spec.gamma);
    spec.c1 = cfg.get_double("data", "c1", spec.c1);
    spec.p = cfg.get_double("stepper", "p", spec.p);
    spec.dt = cfg.get_double("stepper", "dt", spec.dt);
    spec.t_max = cfg.get_double("stepper", "t_max", spec.t_max);
    spec.scheme = parse_scheme(cfg.get_string("stepper", "scheme", scheme_name(spec.scheme)));
    spec.eps = cfg.get_double_list("experiment", "eps", spec.eps);
    spec.halve_dt = cfg.get_bool("experiment", "halve_dt", spec.halve_dt);
    spec.tolerance = cfg.get_double("experiment", "tolerance", spec.tolerance);
    return spec;
}

DichotomySpec load_dichotomy(const ConfigFile& cfg) {
    DichotomySpec spec;
    spec.gs = load_structure(cfg);
    spec.grid = load_grid(cfg, spec.gs.rank());
    spec.gamma = cfg.get_double("data", "gamma", spec.gamma);
    spec.eps = cfg.get_double("data", "epsilon", spec.eps);
    spec.c1 = cfg.get_double("data", "c1", spec.c1);
    spec.dt = cfg.get_double("stepper", "dt", spec.dt);
    spec.t_max = cfg.get_double("stepper", "t_max", spec.t_max);
    spec.scheme = parse_scheme(cfg.get_string("stepper", "scheme", scheme_name(spec.scheme)));
    spec.p_grid = cfg.get_double_list("experiment", "p_grid", spec.p_grid);
    return spec;
}

GnProbeSpec load_gn_probe(const ConfigFile& cfg) {
    GnProbeSpec spec;
    if (cfg.has("structure", "weights") || cfg.has("structure", "nu0") ||
        cfg.has("structure", "coeffs"))
        spec.gs = load_structure(cfg);
    spec.s = cfg.get_double("experiment", "s", spec.s);
    spec.q = cfg.get_double("experiment", "q", spec.q);
    spec.band = cfg.get_int("experiment", "band", spec.band);
    spec.fields = cfg.get_int("experiment", "fields", spec.fields);
    const int seed = cfg.get_int("experiment", "seed", static_cast<int>(spec.seed));
    spec.seed = static_cast<std::uint64_t>(seed);
    spec.n_coarse = cfg.get_int("experiment", "n_coarse", spec.n_coarse);
    spec.n_fine = cfg.get_int("experiment", "n_fine", spec.n_fine);
    spec.box_length = cfg.get_double("experiment", "box", spec.box_length);
    return spec;
}

TestfnSpec load_testfn(const ConfigFile& cfg) {
    TestfnSpec spec;
    if (cfg.has("structure", "weights") || cfg.has("structure", "nu0") ||
        cfg.has("structure", "coeffs"))
        spec.gs = load_structure(cfg);
    spec.p = cfg.get_double("experiment", "p", spec.p);
    spec.radii = cfg.get_double_list("experiment", "radii", spec.radii);
    spec.bump = parse_bump(cfg.get_string("experiment", "bump", bump_name(spec.bump)));
    spec.grid_points = cfg.get_int("experiment", "grid_points", spec.grid_points);
    spec.box_factor = cfg.get_double("experiment", "box_factor", spec.box_factor);
    spec.phi_floor = cfg.get_double("experiment", "phi_floor", spec.phi_floor);
    return spec;
}

DecayOptions load_decay_options(const ConfigFile& cfg) {
    DecayOptions opt;
    opt.tolerance = cfg.get_double("experiment", "tolerance", opt.tolerance);
    opt.t_min = cfg.get_double("experiment", "t_min", opt.t_min);
    opt.t_max = cfg.get_double("experiment", "t_max", opt.t_max);
    opt.samples = cfg.get_int("experiment", "samples", opt.samples);
    return opt;
}

// ---------- round-trip emission ----------

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

template <typename T, typename Fn>
std::string join(const std::vector<T>& values, Fn&& fmt) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += fmt(values[i]);
    }
    return out;
}

} // namespace

std::string simulation_to_text(const SimulationConfig& cfg) {
    std::ostringstream os;
    os << "[structure]\n";
    os << "weights = "
       << join(cfg.gs.weights(), [](int w) { return std::to_string(w); }) << "\n";
    os << "coeffs = " << join(cfg.gs.coeffs(), g17) << "\n";
    os << "nu0 = " << cfg.gs.nu0() << "\n\n";
    os << "[grid]\n";
    os << "points = "
       << join(cfg.grid.dims, [](int n) { return std::to_string(n); }) << "\n";
    os << "box = " << join(cfg.grid.box, g17) << "\n\n";
    os << "[data]\n";
    os << "gamma = " << g17(cfg.gamma) << "\n";
    os << "epsilon = " << g17(cfg.epsilon) << "\n";
    os << "c1 = " << g17(cfg.c1) << "\n\n";
    os << "[stepper]\n";
    os << "p = " << g17(cfg.p) << "\n";
    os << "dt = " << g17(cfg.dt) << "\n";
    os << "t_max = " << g17(cfg.t_max) << "\n";
    os << "scheme = " << scheme_name(cfg.scheme) << "\n";
    os << "dealias = " << (cfg.dealias ? "true" : "false") << "\n";
    os << "blowup_threshold = " << g17(cfg.blowup_threshold) << "\n";
    os << "snapshot_stride = " << cfg.snapshot_stride << "\n";
    os << "s_diag = " << g17(cfg.s_diag) << "\n";
    return os.str();
}

} // namespace rockwave
