#pragma once

#include <string>
#include <vector>

#include "angio/harness/config.hpp"
#include "angio/harness/scenario.hpp"

namespace angio::harness {

struct SweepRow {
    int run_id = 0;
    std::vector<std::string> values;  ///< one per axis, as written in the config
    int exit_code = exit_ok;
    std::string error;                ///< config or numerical failure text, empty on success
    std::vector<std::string> fields;  ///< the summary columns, see sweep_csv_header
};

struct SweepResult {
    std::vector<std::string> axis_keys;
    std::vector<SweepRow> rows;

    std::string csv() const;
};

/// Cartesian product of the axis values; the first axis varies slowest.
std::vector<std::vector<std::string>> sweep_points(const std::vector<SweepAxis>& axes);

/// Columns after run_id and the axis keys.
std::vector<std::string> sweep_csv_header();

/// Runs every point of cfg.sweep_axes (a single run when there are none) on up to
/// cfg.max_parallel threads. Each run writes into <output.dir>/run_NNNN when write_outputs
/// is set, and sweep.csv collects one row per point in sweep order. Failures stay in their row.
SweepResult run_sweep(const ScenarioConfig& cfg, bool write_outputs = true);

}  // namespace angio::harness
