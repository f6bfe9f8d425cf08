#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "angio/functionals.hpp"
#include "angio/harness/config.hpp"
#include "angio/thresholds.hpp"

namespace angio::harness {

/// Process exit codes shared by the CLI and the sweep rows.
enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_blowup = 2, exit_numerical = 3 };

int exit_code_for(TerminationReason reason) noexcept;

/// Ordered key=value verdict lines written to summary.txt.
struct Verdict {
    std::vector<std::pair<std::string, std::string>> entries;
    bool all_pass = true;

    void add(const std::string& key, const std::string& value);
    /// Adds key = pass/fail and folds the result into all_pass.
    void check(const std::string& key, bool ok);
    /// Value for key, or "" when absent.
    std::string get(const std::string& key) const;
    std::string text() const;
};

struct ScenarioResult {
    int exit_code = exit_ok;
    Trajectory trajectory;
    ThresholdReport thresholds;
    std::optional<RateFit> deviation_fit;  ///< l2_u_dev over its signal window
    std::optional<RateFit> f1_fit;
    std::optional<RateFit> f2_fit;
    Verdict verdict;
};

/// Largest increase of column F1 (or F2) over records with t >= t_start, relative to its
/// value at the first such record. Negative or zero means nonincreasing. NaN if undefined.
double worst_relative_increase(const Trajectory& traj, bool use_f2, double t_start);

/// Runs the config, builds the threshold report, fits and verdict. With write_outputs the
/// output directory receives trajectory.csv, thresholds.txt, thresholds.csv, summary.txt and
/// u_final.csv / v_final.csv / w_final.csv. Output bytes depend only on the config.
ScenarioResult run_scenario(const ScenarioConfig& cfg, bool write_outputs = true);

/// Parses "t0:t1". Throws InvalidArgument naming --window on malformed input.
DecayWindow parse_window(const std::string& text);

/// Decay-rate fit of one column of a trajectory CSV. Without a window the second half of
/// the time span is used. Throws InvalidArgument for a missing column (listing the
/// available ones) or nonpositive data in the window.
RateFit fit_report(const std::string& csv_path, const std::string& column, const std::optional<DecayWindow>& window);

/// key=value printout of a fit.
std::string format_rate_fit(const RateFit& fit, const std::string& column);

}  // namespace angio::harness
