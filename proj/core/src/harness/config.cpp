#include "angio/harness/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

namespace angio::harness {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value)
{
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(trim(item));
    }
    return out;
}

double to_real(const std::string& key, const std::string& text, int line)
{
    char* end = nullptr;
    const double x = std::strtod(text.c_str(), &end);
    if (text.empty() || *end != '\0' || !std::isfinite(x)) {
        throw ConfigError(key, line, "expected a finite number, got '" + text + "'");
    }
    return x;
}

long long to_integer(const std::string& key, const std::string& text, int line)
{
    char* end = nullptr;
    const long long x = std::strtoll(text.c_str(), &end, 10);
    if (text.empty() || *end != '\0') {
        throw ConfigError(key, line, "expected an integer, got '" + text + "'");
    }
    return x;
}

bool to_bool(const std::string& key, const std::string& text, int line)
{
    if (text == "true" || text == "yes" || text == "1") return true;
    if (text == "false" || text == "no" || text == "0") return false;
    throw ConfigError(key, line, "expected true or false, got '" + text + "'");
}

double nonnegative(const std::string& key, const std::string& text, int line)
{
    const double x = to_real(key, text, line);
    if (x < 0.0) {
        throw ConfigError(key, line, "must be >= 0, got " + text);
    }
    return x;
}

double positive(const std::string& key, const std::string& text, int line)
{
    const double x = to_real(key, text, line);
    if (!(x > 0.0)) {
        throw ConfigError(key, line, "must be > 0, got " + text);
    }
    return x;
}

int bounded_int(const std::string& key, const std::string& text, int line, long long lo)
{
    const long long x = to_integer(key, text, line);
    if (x < lo || x > 1'000'000'000LL) {
        throw ConfigError(key, line, "must be an integer >= " + std::to_string(lo) + ", got " + text);
    }
    return static_cast<int>(x);
}

int line_of(const ScenarioConfig& cfg, const std::string& key)
{
    const auto it = cfg.key_lines.find(key);
    return it == cfg.key_lines.end() ? 0 : it->second;
}

}  // namespace

ConfigError::ConfigError(const std::string& key, int line, const std::string& what)
    : InvalidArgument((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) + key + ": " + what),
      key_(key),
      line_(line)
{
}

std::string to_string(Preset preset)
{
    switch (preset) {
    case Preset::C1_no_mitosis:
        return "C1_no_mitosis";
    case Preset::C2_logistic:
        return "C2_logistic";
    case Preset::chi_zero_corollary:
        return "chi_zero_corollary";
    case Preset::R3_theta_gt1:
        return "R3_theta_gt1";
    case Preset::heat_oracle:
        return "heat_oracle";
    case Preset::custom:
        return "custom";
    }
    return "unknown";
}

Preset parse_preset(const std::string& name)
{
    for (Preset p : {Preset::C1_no_mitosis, Preset::C2_logistic, Preset::chi_zero_corollary, Preset::R3_theta_gt1,
                     Preset::heat_oracle, Preset::custom}) {
        if (to_string(p) == name) {
            return p;
        }
    }
    throw InvalidArgument("unknown preset '" + name +
                          "' (expected C1_no_mitosis, C2_logistic, chi_zero_corollary, R3_theta_gt1, heat_oracle or custom)");
}

Grid ScenarioConfig::grid() const
{
    const std::vector<double> l = lengths.empty() ? std::vector<double>(static_cast<std::size_t>(dim), 1.0) : lengths;
    return build_grid(dim, l, cells).with_convex_flag(convex);
}

SimState ScenarioConfig::initial_state() const
{
    InitialSpec spec = initial;
    spec.seed = seed;
    return make_initial(grid(), spec, solver.elliptic);
}

ScenarioConfig preset_defaults(Preset preset)
{
    ScenarioConfig cfg;
    cfg.preset = preset;
    auto& p = cfg.params;
    auto& s = cfg.solver;
    auto& init = cfg.initial;
    switch (preset) {
    case Preset::C1_no_mitosis:
        p.chi = 0.5;
        p.xi1 = p.xi2 = 1.0;
        p.d = 4.0;
        s.dt = 1e-2;
        s.t_end = 30.0;
        init.profile = InitialProfile::cosine_bump;
        init.base = 1.0;
        init.amplitude = 0.3;
        init.v_base = 0.5;
        init.v_amplitude = 0.1;
        break;
    case Preset::C2_logistic:
        p.a = p.mu = p.theta = 1.0;
        p.chi = p.xi1 = p.xi2 = 0.5;
        p.d = 1.0;
        s.dt = 1e-2;
        s.t_end = 30.0;
        init.profile = InitialProfile::cosine_bump;
        init.base = 1.2;
        init.amplitude = 0.3;
        init.v_base = 0.8;
        break;
    case Preset::chi_zero_corollary:
        p.chi = 0.0;
        p.xi1 = p.xi2 = p.d = 1.0;
        s.dt = 5e-3;
        s.t_end = 50.0;
        init.profile = InitialProfile::cosine_bump;
        init.base = 1.0;
        init.amplitude = 0.5;
        init.v_base = 1.0;
        break;
    case Preset::R3_theta_gt1:
        p.a = p.mu = 1.0;
        p.theta = 2.0;
        p.chi = p.xi1 = p.xi2 = 0.5;
        p.d = 1.0;
        s.dt = 1e-2;
        s.t_end = 30.0;
        init.profile = InitialProfile::cosine_bump;
        init.base = 1.0;
        init.amplitude = 0.3;
        break;
    case Preset::heat_oracle:
        p.chi = p.xi1 = p.xi2 = p.a = p.mu = 0.0;
        s.dt = 1e-4;
        s.t_end = 1.0;
        s.record_every = 1;
        init.profile = InitialProfile::cosine_bump;
        init.base = 1.0;
        init.amplitude = 0.1;
        init.v_base = 1.0;
        break;
    case Preset::custom:
        break;
    }
    return cfg;
}

void apply_setting(ScenarioConfig& cfg, const std::string& key, const std::string& value, int line)
{
    auto& p = cfg.params;
    auto& s = cfg.solver;
    auto& init = cfg.initial;
    auto& g = cfg.constants;

    if (key == "preset") {
        try {
            cfg.preset = parse_preset(value);
        } catch (const InvalidArgument& e) {
            throw ConfigError(key, line, e.what());
        }
    } else if (key == "seed") {
        const long long x = to_integer(key, value, line);
        if (x < 0) throw ConfigError(key, line, "must be >= 0, got " + value);
        cfg.seed = static_cast<std::uint64_t>(x);
    } else if (key == "output.dir") {
        if (value.empty()) throw ConfigError(key, line, "must not be empty");
        cfg.output_dir = value;
    } else if (key == "grid.cells") {
        cfg.cells.clear();
        for (const auto& item : split_list(value)) {
            cfg.cells.push_back(bounded_int(key, item, line, 4));
        }
        if (cfg.cells.empty() || cfg.cells.size() > 2) {
            throw ConfigError(key, line, "needs one or two cell counts, got '" + value + "'");
        }
        if (!cfg.key_lines.count("grid.dim")) cfg.dim = static_cast<int>(cfg.cells.size());
    } else if (key == "grid.dim") {
        cfg.dim = bounded_int(key, value, line, 1);
        if (cfg.dim > 2) throw ConfigError(key, line, "must be 1 or 2, got " + value);
    } else if (key == "grid.lengths") {
        cfg.lengths.clear();
        for (const auto& item : split_list(value)) {
            cfg.lengths.push_back(positive(key, item, line));
        }
        if (cfg.lengths.empty() || cfg.lengths.size() > 2) {
            throw ConfigError(key, line, "needs one or two lengths, got '" + value + "'");
        }
    } else if (key == "grid.convex") {
        cfg.convex = to_bool(key, value, line);
    } else if (key == "params.chi") {
        p.chi = nonnegative(key, value, line);
    } else if (key == "params.xi1") {
        p.xi1 = nonnegative(key, value, line);
    } else if (key == "params.xi2") {
        p.xi2 = nonnegative(key, value, line);
    } else if (key == "params.d") {
        p.d = positive(key, value, line);
    } else if (key == "params.a") {
        p.a = nonnegative(key, value, line);
    } else if (key == "params.mu") {
        p.mu = nonnegative(key, value, line);
    } else if (key == "params.theta") {
        p.theta = positive(key, value, line);
    } else if (key == "params.n_dim") {
        p.n_dim = bounded_int(key, value, line, 1);
    } else if (key == "solver.dt") {
        s.dt = positive(key, value, line);
    } else if (key == "solver.t_end") {
        s.t_end = positive(key, value, line);
    } else if (key == "solver.cfl_safety") {
        s.cfl_safety = positive(key, value, line);
        if (s.cfl_safety > 1.0) throw ConfigError(key, line, "must lie in (0, 1], got " + value);
    } else if (key == "solver.flux_scheme") {
        try {
            s.flux_scheme = parse_flux_scheme(value);
        } catch (const InvalidArgument& e) {
            throw ConfigError(key, line, e.what());
        }
    } else if (key == "solver.blowup_threshold") {
        s.blowup_threshold = positive(key, value, line);
    } else if (key == "solver.record_every") {
        s.record_every = bounded_int(key, value, line, 1);
    } else if (key == "solver.elliptic.tolerance") {
        s.elliptic.tolerance = positive(key, value, line);
        if (s.elliptic.tolerance > 1e-4) throw ConfigError(key, line, "must lie in (0, 1e-4], got " + value);
    } else if (key == "solver.elliptic.max_iterations") {
        s.elliptic.max_iterations = bounded_int(key, value, line, 0);
    } else if (key == "initial.profile") {
        try {
            init.profile = parse_initial_profile(value);
        } catch (const InvalidArgument& e) {
            throw ConfigError(key, line, e.what());
        }
    } else if (key == "initial.base") {
        init.base = positive(key, value, line);
    } else if (key == "initial.amplitude") {
        init.amplitude = to_real(key, value, line);
    } else if (key == "initial.width") {
        init.width = positive(key, value, line);
    } else if (key == "initial.v_base") {
        init.v_base = nonnegative(key, value, line);
    } else if (key == "initial.v_amplitude") {
        init.v_amplitude = to_real(key, value, line);
    } else if (key == "constants.K1") {
        g.K1 = positive(key, value, line);
    } else if (key == "constants.K2") {
        g.K2 = positive(key, value, line);
    } else if (key == "constants.C0") {
        g.C0 = positive(key, value, line);
    } else if (key == "constants.c13") {
        g.c13 = positive(key, value, line);
    } else if (key == "constants.xi0") {
        g.xi0 = positive(key, value, line);
    } else if (key == "constants.mu0") {
        g.mu0 = positive(key, value, line);
    } else if (key == "sweep.max_parallel") {
        cfg.max_parallel = bounded_int(key, value, line, 1);
    } else if (key == "sweep.cap") {
        cfg.sweep_cap = bounded_int(key, value, line, 1);
    } else if (key.rfind("sweep.", 0) == 0) {
        const std::string target = key.substr(6);
        const bool sweepable = target.rfind("params.", 0) == 0 || target.rfind("solver.", 0) == 0 ||
                               target.rfind("initial.", 0) == 0 || target.rfind("constants.", 0) == 0 ||
                               target == "seed";
        if (!sweepable) {
            throw ConfigError(key, line, "only params.*, solver.*, initial.*, constants.* and seed can be swept");
        }
        SweepAxis axis{target, split_list(value)};
        if (axis.values.empty() || (axis.values.size() == 1 && axis.values[0].empty())) {
            throw ConfigError(key, line, "needs a comma-separated list of values");
        }
        ScenarioConfig probe = cfg;
        for (const auto& v : axis.values) {
            apply_setting(probe, target, v, line);
        }
        for (const auto& existing : cfg.sweep_axes) {
            if (existing.key == target) throw ConfigError(key, line, "axis already given");
        }
        cfg.sweep_axes.push_back(std::move(axis));
    } else {
        throw ConfigError(key, line, "unknown key");
    }
    cfg.key_lines[key] = line;
}

void validate_config(const ScenarioConfig& cfg)
{
    if (cfg.cells.empty()) {
        throw ConfigError("grid.cells", 0, "missing required key");
    }
    if (static_cast<int>(cfg.cells.size()) != cfg.dim) {
        throw ConfigError("grid.cells", line_of(cfg, "grid.cells"),
                          "has " + std::to_string(cfg.cells.size()) + " entries but grid.dim = " +
                              std::to_string(cfg.dim));
    }
    if (!cfg.lengths.empty() && static_cast<int>(cfg.lengths.size()) != cfg.dim) {
        throw ConfigError("grid.lengths", line_of(cfg, "grid.lengths"),
                          "has " + std::to_string(cfg.lengths.size()) + " entries but grid.dim = " +
                              std::to_string(cfg.dim));
    }

    const auto& p = cfg.params;
    auto require = [&cfg](bool ok, const std::string& key, const std::string& constraint) {
        if (!ok) {
            throw ConfigError(key, line_of(cfg, key), "preset " + to_string(cfg.preset) + " requires " + constraint);
        }
    };
    switch (cfg.preset) {
    case Preset::C1_no_mitosis:
        require(p.a == 0.0, "params.a", "a = 0 (no mitosis)");
        require(p.mu == 0.0, "params.mu", "mu = 0 (no mitosis)");
        break;
    case Preset::C2_logistic:
        require(p.a > 0.0, "params.a", "a > 0; with a = 0 the carrying capacity b = (a/mu)^{1/theta} degenerates to 0");
        require(p.mu > 0.0, "params.mu", "mu > 0; b = (a/mu)^{1/theta} is undefined for mu = 0");
        require(p.theta >= 1.0, "params.theta", "theta >= 1");
        break;
    case Preset::chi_zero_corollary:
        require(p.chi == 0.0, "params.chi", "chi = 0");
        break;
    case Preset::R3_theta_gt1:
        require(p.theta > 1.0, "params.theta", "theta > 1");
        require(p.mu > 0.0, "params.mu", "mu > 0");
        break;
    case Preset::heat_oracle:
        for (const auto& [name, x] : {std::pair<const char*, double>{"chi", p.chi}, {"xi1", p.xi1}, {"xi2", p.xi2},
                                      {"a", p.a}, {"mu", p.mu}}) {
            require(x == 0.0, std::string("params.") + name, std::string(name) + " = 0 (pure diffusion)");
        }
        break;
    case Preset::custom:
        break;
    }

    try {
        p.validate();
        cfg.solver.validate();
        cfg.constants.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const InvalidArgument& e) {
        throw ConfigError("config", 0, e.what());
    }

    try {
        cfg.grid();
    } catch (const InvalidArgument& e) {
        throw ConfigError("grid.cells", line_of(cfg, "grid.cells"), e.what());
    }
    SimState initial = [&] {
        try {
            return cfg.initial_state();
        } catch (const InvalidArgument& e) {
            throw ConfigError("initial.amplitude", line_of(cfg, "initial.amplitude"), e.what());
        }
    }();
    const double bound = stable_dt(initial, p, cfg.solver);
    if (cfg.solver.dt > bound) {
        throw ConfigError("solver.dt", line_of(cfg, "solver.dt"),
                          "must not exceed the stable step " + format_real(bound) + " of the initial state, got " +
                              format_real(cfg.solver.dt));
    }
}

ScenarioConfig parse_config_text(const std::string& text)
{
    struct Entry {
        std::string key;
        std::string value;
        int line;
    };
    std::vector<Entry> entries;
    std::set<std::string> seen;
    std::istringstream is(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(line, line_no, "expected 'key = value'");
        }
        Entry e{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no};
        if (e.key.empty()) {
            throw ConfigError("(empty)", line_no, "missing key before '='");
        }
        if (!seen.insert(e.key).second) {
            throw ConfigError(e.key, line_no, "duplicate key");
        }
        entries.push_back(std::move(e));
    }

    const Entry* preset_entry = nullptr;
    for (const auto& e : entries) {
        if (e.key == "preset") preset_entry = &e;
    }
    if (!preset_entry) {
        throw ConfigError("preset", 0, "missing required key");
    }
    Preset preset;
    try {
        preset = parse_preset(preset_entry->value);
    } catch (const InvalidArgument& e) {
        throw ConfigError("preset", preset_entry->line, e.what());
    }

    ScenarioConfig cfg = preset_defaults(preset);
    // grid.dim first so grid.cells does not overwrite it
    for (const auto& e : entries) {
        if (e.key == "grid.dim") apply_setting(cfg, e.key, e.value, e.line);
    }
    // Sweep axes are probed against the fully configured base, so they go last.
    for (const auto& e : entries) {
        if (e.key != "grid.dim" && e.key.rfind("sweep.", 0) != 0) apply_setting(cfg, e.key, e.value, e.line);
    }
    for (const auto& e : entries) {
        if (e.key.rfind("sweep.", 0) == 0) apply_setting(cfg, e.key, e.value, e.line);
    }
    if (!cfg.key_lines.count("params.n_dim")) {
        cfg.params.n_dim = cfg.dim;
    }
    validate_config(cfg);
    return cfg;
}

ScenarioConfig parse_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config", 0, "cannot open " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace angio::harness
