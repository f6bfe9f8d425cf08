#include "angio/harness/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "angio/elliptic.hpp"
#include "angio/trajectory_csv.hpp"

namespace angio::harness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::optional<RateFit> fit_column(const Trajectory& traj, double DiagnosticsRecord::*member)
{
    std::vector<double> t, y;
    for (const auto& r : traj.records) {
        t.push_back(r.t);
        y.push_back(r.*member);
    }
    try {
        return fit_decay_rate(t, y, signal_window(t, y));
    } catch (const InvalidArgument&) {
        return std::nullopt;
    }
}

double linf_deviation(const Field& f, double ref)
{
    double worst = 0.0;
    for (double x : f.values()) {
        worst = std::max(worst, std::abs(x - ref));
    }
    return worst;
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    out << text;
}

void write_field(const std::filesystem::path& path, const Field& f)
{
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    write_field_csv(out, f);
}

void add_fit(Verdict& v, const std::string& name, const std::optional<RateFit>& fit)
{
    if (!fit) {
        v.add("fitted_rate_" + name, "n/a");
        return;
    }
    v.add("fitted_rate_" + name, format_real(fit->rate));
    v.add("fitted_r2_" + name, format_real(fit->r_squared));
    v.add("fit_window_" + name, format_real(fit->window_start) + ":" + format_real(fit->window_end));
}

}  // namespace

int exit_code_for(TerminationReason reason) noexcept
{
    switch (reason) {
    case TerminationReason::completed:
        return exit_ok;
    case TerminationReason::blowup_detected:
        return exit_blowup;
    case TerminationReason::step_failure:
        return exit_numerical;
    }
    return exit_numerical;
}

void Verdict::add(const std::string& key, const std::string& value)
{
    entries.emplace_back(key, value);
}

void Verdict::check(const std::string& key, bool ok)
{
    add(key, ok ? "pass" : "fail");
    all_pass = all_pass && ok;
}

std::string Verdict::get(const std::string& key) const
{
    for (const auto& [k, v] : entries) {
        if (k == key) return v;
    }
    return {};
}

std::string Verdict::text() const
{
    std::ostringstream os;
    for (const auto& [k, v] : entries) {
        os << k << '=' << v << '\n';
    }
    return os.str();
}

double worst_relative_increase(const Trajectory& traj, bool use_f2, double t_start)
{
    double scale = kNaN;
    double prev = kNaN;
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& r : traj.records) {
        if (r.t < t_start) continue;
        const double f = use_f2 ? r.F2 : r.F1;
        if (!std::isfinite(f)) return kNaN;
        if (std::isnan(scale)) {
            scale = std::max(std::abs(f), std::numeric_limits<double>::min());
        } else {
            worst = std::max(worst, (f - prev) / scale);
        }
        prev = f;
    }
    return std::isinf(worst) ? kNaN : worst;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, bool write_outputs)
{
    const Grid grid = cfg.grid();
    const auto& p = cfg.params;
    const SimState initial = cfg.initial_state();

    ScenarioResult res{exit_ok, run(initial, p, cfg.solver), {}, std::nullopt, std::nullopt, std::nullopt, {}};
    const Trajectory& traj = res.trajectory;
    res.exit_code = exit_code_for(traj.reason);

    const double cp = spectral_info(grid, cfg.solver.elliptic).poincare_cp;
    res.thresholds = build_threshold_report(traj, p, grid, cp, cfg.constants);
    const ThresholdReport& rep = res.thresholds;

    res.deviation_fit = fit_column(traj, &DiagnosticsRecord::l2_u_dev);
    if (p.a == 0.0 && p.mu == 0.0) res.f1_fit = fit_column(traj, &DiagnosticsRecord::F1);
    if (p.logistic()) res.f2_fit = fit_column(traj, &DiagnosticsRecord::F2);

    Verdict& v = res.verdict;
    v.add("preset", to_string(cfg.preset));
    v.add("regime", rep.regime);
    v.add("termination", to_string(traj.reason));
    if (!traj.message.empty()) v.add("message", traj.message);
    v.add("steps", std::to_string(traj.steps));
    v.add("dt", format_real(traj.dt));
    v.add("t_final", format_real(traj.records.empty() ? 0.0 : traj.records.back().t));
    v.check("completed", traj.reason == TerminationReason::completed);

    bool positive = true;
    for (const auto& r : traj.records) {
        positive = positive && r.min_u > 0.0 && r.min_v >= 0.0;
    }
    v.check("positivity", positive);

    const double ref = traj.reference_level;
    v.add("reference_level", format_real(ref));
    v.add("terminal_linf_u_dev", format_real(linf_deviation(traj.terminal.u, ref)));
    v.add("terminal_linf_v_dev", format_real(linf_deviation(traj.terminal.v, ref)));

    const double t_mono = std::min(1.0, 0.5 * cfg.solver.t_end);
    if (p.a == 0.0 && p.mu == 0.0) {
        double drift = 0.0;
        for (const auto& r : traj.records) {
            drift = std::max(drift, std::abs(r.mass_u - traj.records.front().mass_u));
        }
        v.add("mass_drift_relative", format_real(drift / traj.records.front().mass_u));
        const double inc = worst_relative_increase(traj, false, t_mono);
        v.add("F1_worst_relative_increase", format_real(inc));
        v.check("F1_monotone", !std::isnan(inc) && inc <= 1e-8);
    }
    if (p.logistic()) {
        const double inc = worst_relative_increase(traj, true, t_mono);
        v.add("F2_worst_relative_increase", format_real(inc));
        v.check("F2_monotone", !std::isnan(inc) && inc <= 1e-8);
    }

    if (!std::isnan(rep.d0_check_value)) {
        v.add("d0_check_value", format_real(rep.d0_check_value));
        v.check("d0_check", rep.d0_check_passes);
    }
    if (!std::isnan(rep.mu_threshold)) {
        v.add("mu_threshold", format_real(rep.mu_threshold));
        v.check("mu_threshold_check", rep.mu_threshold_passes);
    }

    add_fit(v, "l2_u_dev", res.deviation_fit);
    if (p.a == 0.0 && p.mu == 0.0) add_fit(v, "F1", res.f1_fit);
    if (p.logistic()) {
        add_fit(v, "F2", res.f2_fit);
        v.add("sigma", format_real(rep.sigma));
        if (!std::isnan(rep.sigma)) {
            v.check("F2_rate_vs_sigma", res.f2_fit && res.f2_fit->rate >= 0.9 * rep.sigma);
        }
    }
    if (cfg.preset == Preset::heat_oracle) {
        double expected = 0.0;
        for (int axis = 0; axis < grid.dim(); ++axis) {
            expected += std::pow(std::numbers::pi / grid.length(axis), 2);
        }
        v.add("expected_heat_rate", format_real(expected));
        v.check("heat_rate_check",
                res.deviation_fit && std::abs(res.deviation_fit->rate - expected) <= 0.02 * expected);
    }
    v.add("verdict", v.all_pass ? "pass" : "fail");

    if (write_outputs) {
        const std::filesystem::path dir(cfg.output_dir);
        std::filesystem::create_directories(dir);
        write_trajectory_csv((dir / "trajectory.csv").string(), traj);
        write_text(dir / "thresholds.txt", to_key_value(rep));
        write_text(dir / "thresholds.csv", threshold_csv_header() + "\n" + threshold_csv_row(rep) + "\n");
        write_text(dir / "summary.txt", v.text());
        write_field(dir / "u_final.csv", traj.terminal.u);
        write_field(dir / "v_final.csv", traj.terminal.v);
        write_field(dir / "w_final.csv", traj.terminal.w);
    }
    return res;
}

DecayWindow parse_window(const std::string& text)
{
    const auto colon = text.find(':');
    auto bad = [&text] { return InvalidArgument("--window: expected t0:t1 with t0 < t1, got '" + text + "'"); };
    if (colon == std::string::npos) throw bad();
    DecayWindow w;
    try {
        std::size_t n0 = 0, n1 = 0;
        const std::string a = text.substr(0, colon), b = text.substr(colon + 1);
        w.t0 = std::stod(a, &n0);
        w.t1 = std::stod(b, &n1);
        if (n0 != a.size() || n1 != b.size()) throw bad();
    } catch (const std::logic_error&) {
        throw bad();
    }
    if (!(w.t0 < w.t1)) throw bad();
    return w;
}

RateFit fit_report(const std::string& csv_path, const std::string& column, const std::optional<DecayWindow>& window)
{
    const CsvTable table = read_csv_table(csv_path);
    const std::vector<double> y = table.column(column);
    const std::vector<double> t = table.column("t");
    return fit_decay_rate(t, y, window ? *window : default_window(t));
}

std::string format_rate_fit(const RateFit& fit, const std::string& column)
{
    std::ostringstream os;
    os << "column=" << column << '\n'
       << "window=" << format_real(fit.window_start) << ':' << format_real(fit.window_end) << '\n'
       << "samples=" << fit.samples << '\n'
       << "rate=" << format_real(fit.rate) << '\n'
       << "intercept=" << format_real(fit.intercept) << '\n'
       << "r_squared=" << format_real(fit.r_squared) << '\n';
    return os.str();
}

}  // namespace angio::harness
