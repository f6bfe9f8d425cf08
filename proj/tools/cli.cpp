#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "angio/harness/config.hpp"
#include "angio/harness/scenario.hpp"
#include "angio/harness/sweep.hpp"
#include "angio/harness/verify.hpp"

namespace angio::cli {

namespace {

using namespace angio::harness;

struct Globals {
    std::string out;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

ScenarioConfig load(const std::string& path, const Globals& g)
{
    ScenarioConfig cfg = parse_config(path);
    if (!g.out.empty()) cfg.output_dir = g.out;
    if (g.seed) {
        cfg.seed = *g.seed;
        validate_config(cfg);
    }
    return cfg;
}

int do_run(const std::string& path, const Globals& g, std::ostream& out)
{
    const ScenarioConfig cfg = load(path, g);
    const ScenarioResult r = run_scenario(cfg);
    if (!g.quiet) {
        out << r.verdict.text();
        out << "outputs written to " << cfg.output_dir << '\n';
    }
    return r.exit_code;
}

int do_sweep(const std::string& path, const Globals& g, std::ostream& out)
{
    const ScenarioConfig cfg = load(path, g);
    const SweepResult r = run_sweep(cfg);
    if (!g.quiet) {
        int failed = 0;
        for (const auto& row : r.rows) failed += row.exit_code != exit_ok;
        out << r.rows.size() << " runs, " << failed << " with nonzero exit; table in "
            << (std::filesystem::path(cfg.output_dir) / "sweep.csv").string() << '\n';
    }
    return exit_ok;
}

int do_verify(const VerifyOptions& opts, const Globals& g, std::ostream& out)
{
    const VerifyReport r = verify_suite(opts);
    int failed = 0;
    for (const auto& c : r.cases) {
        failed += !c.pass;
        if (!g.quiet || !c.pass) {
            out << (c.pass ? "pass " : "FAIL ") << c.test_id << " p=" << format_real(c.p) << ' ' << c.inequality
                << " lhs=" << format_real(c.lhs) << " rhs=" << format_real(c.rhs)
                << " margin=" << format_real(c.margin) << '\n';
        }
    }
    out << r.cases.size() << " cases, " << failed << " failed\n";
    if (!g.out.empty()) {
        std::filesystem::create_directories(g.out);
        std::ofstream f(std::filesystem::path(g.out) / "verify_report.csv");
        f << r.csv();
    }
    return r.all_pass ? exit_ok : exit_usage;
}

int do_fit(const std::string& csv, const std::string& column, const std::string& window, std::ostream& out)
{
    std::optional<DecayWindow> w;
    if (!window.empty()) w = parse_window(window);
    out << format_rate_fit(fit_report(csv, column, w), column);
    return exit_ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Simulator and verification harness for a chemotaxis-convection angiogenesis model", "angio"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    std::uint64_t seed = 0;
    app.add_option("--out", g.out, "Output directory (overrides output.dir)");
    auto* seed_opt = app.add_option("--seed", seed, "Seed (overrides the config's seed)");
    app.add_flag("--quiet", g.quiet, "Only print failures");

    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "Run one scenario config");
    run_cmd->add_option("config", config_path, "Config file")->required();
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep config");
    sweep_cmd->add_option("config", config_path, "Config file")->required();

    VerifyOptions vopts;
    auto* verify_cmd = app.add_subcommand("verify", "Run the inequality and oracle battery");
    verify_cmd->add_flag("--break-tolerance", vopts.break_tolerance, "Debug: halve every right-hand side");

    std::string csv_path, column, window;
    auto* fit_cmd = app.add_subcommand("fit", "Fit an exponential decay rate to a CSV column");
    fit_cmd->add_option("csv", csv_path, "Trajectory CSV")->required();
    fit_cmd->add_option("--column", column, "Column name")->required();
    fit_cmd->add_option("--window", window, "Time window t0:t1 (default: second half)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    if (seed_opt->count() > 0) g.seed = seed;

    try {
        if (*run_cmd) return do_run(config_path, g, out);
        if (*sweep_cmd) return do_sweep(config_path, g, out);
        if (*verify_cmd) return do_verify(vopts, g, out);
        if (*fit_cmd) return do_fit(csv_path, column, window, out);
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_numerical;
    }
    return exit_usage;
}

}  // namespace angio::cli
