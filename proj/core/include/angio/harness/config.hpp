#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "angio/dynamics.hpp"
#include "angio/errors.hpp"
#include "angio/grid.hpp"
#include "angio/model.hpp"
#include "angio/thresholds.hpp"

namespace angio::harness {

enum class Preset { C1_no_mitosis, C2_logistic, chi_zero_corollary, R3_theta_gt1, heat_oracle, custom };

std::string to_string(Preset preset);
Preset parse_preset(const std::string& name);

/// A config problem tied to one key (and the line it came from, when it came from a file).
class ConfigError : public InvalidArgument {
public:
    ConfigError(const std::string& key, int line, const std::string& what);

    const std::string& key() const noexcept { return key_; }
    int line() const noexcept { return line_; }

private:
    std::string key_;
    int line_;
};

/// One swept key with its raw values; values are applied through the same setter as the file.
struct SweepAxis {
    std::string key;
    std::vector<std::string> values;
};

/// Everything one run needs. Keys and defaults:
///
///   preset                      required; C1_no_mitosis, C2_logistic, chi_zero_corollary,
///                               R3_theta_gt1, heat_oracle or custom
///   seed                        0
///   output.dir                  out
///   grid.cells                  required; one or two integers (also fixes the dimension)
///   grid.dim                    number of grid.cells entries
///   grid.lengths                1 per axis
///   grid.convex                 true
///   params.chi/xi1/xi2/d/a/mu/theta/n_dim   preset defaults; n_dim defaults to grid.dim
///   solver.dt/t_end/cfl_safety/flux_scheme/blowup_threshold/record_every
///   solver.elliptic.tolerance/max_iterations
///   initial.profile/base/amplitude/width/v_base/v_amplitude
///   constants.K1/K2/C0/c13/xi0/mu0          1
///   sweep.max_parallel          1
///   sweep.cap                   256 (largest allowed Cartesian product)
///   sweep.<key> = x, y, ...     one sweep axis over any params.* / solver.* / initial.* key
///
/// Preset defaults (before file overrides):
///   C1_no_mitosis       chi 0.5, xi1 xi2 1, d 4, a mu 0; u0 = 1 + 0.3 cos, v0 = 0.5 + 0.1 cos; dt 1e-2, T 30
///   C2_logistic         a 1, mu 1, theta 1, chi xi1 xi2 0.5, d 1; u0 = 1.2 + 0.3 cos, v0 = 0.8; dt 1e-2, T 30
///   chi_zero_corollary  chi 0, a mu 0, xi1 xi2 d 1; u0 = 1 + 0.5 cos, v0 = 1; dt 5e-3, T 50
///   R3_theta_gt1        a 1, mu 1, theta 2, chi xi1 xi2 0.5, d 1; u0 = 1 + 0.3 cos; dt 1e-2, T 30
///   heat_oracle         chi xi1 xi2 a mu 0; u0 = 1 + 0.1 cos, v0 = 1; dt 1e-4, T 1, record every step
///   custom              the ModelParams / SolverConfig / InitialSpec defaults
struct ScenarioConfig {
    Preset preset = Preset::custom;
    int dim = 1;
    std::vector<double> lengths;
    std::vector<int> cells;
    bool convex = true;
    ModelParams params;
    SolverConfig solver;
    InitialSpec initial;
    std::string output_dir = "out";
    std::uint64_t seed = 0;
    GenericConstants constants;

    std::vector<SweepAxis> sweep_axes;
    int max_parallel = 1;
    int sweep_cap = 256;

    /// Line each key was read from; used to point errors at the file.
    std::map<std::string, int> key_lines;

    Grid grid() const;
    /// The initial state built from initial.* with seed.
    SimState initial_state() const;
};

/// A config with the preset's defaults filled in and nothing else set.
ScenarioConfig preset_defaults(Preset preset);

/// Sets one dotted key from its textual value. Throws ConfigError (with `line`) on unknown
/// keys and type mismatches.
void apply_setting(ScenarioConfig& cfg, const std::string& key, const std::string& value, int line = 0);

/// Range checks, preset constraints and dt against the stable step of the initial state.
void validate_config(const ScenarioConfig& cfg);

ScenarioConfig parse_config_text(const std::string& text);
/// parse_config_text on the file's contents.
ScenarioConfig parse_config(const std::string& path);

}  // namespace angio::harness
