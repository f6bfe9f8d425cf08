#include "angio/harness/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace angio::harness {

namespace {

std::string csv_quote(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

std::string or_na(const std::string& s)
{
    return s.empty() ? "n/a" : s;
}

std::vector<std::string> summary_fields(const ScenarioResult& r)
{
    const Verdict& v = r.verdict;
    std::vector<std::string> out = {
        v.get("termination"),
        or_na(v.get("verdict")),
        or_na(v.get("positivity")),
        or_na(v.get("F1_monotone")),
        or_na(v.get("F2_monotone")),
        or_na(v.get("d0_check")),
        or_na(v.get("mu_threshold_check")),
        or_na(v.get("terminal_linf_u_dev")),
        or_na(v.get("terminal_linf_v_dev")),
        or_na(v.get("fitted_rate_l2_u_dev")),
        or_na(v.get("fitted_rate_F2")),
    };
    std::stringstream ss(threshold_csv_row(r.thresholds));
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        out.push_back(cell);
    }
    return out;
}

}  // namespace

std::vector<std::string> sweep_csv_header()
{
    std::vector<std::string> cols = {"exit_code",
                                     "termination",
                                     "verdict",
                                     "positivity",
                                     "F1_monotone",
                                     "F2_monotone",
                                     "d0_check",
                                     "mu_threshold_check",
                                     "terminal_linf_u_dev",
                                     "terminal_linf_v_dev",
                                     "fitted_rate_l2_u_dev",
                                     "fitted_rate_F2"};
    std::stringstream ss(threshold_csv_header());
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        cols.push_back(cell);
    }
    cols.push_back("error");
    return cols;
}

std::vector<std::vector<std::string>> sweep_points(const std::vector<SweepAxis>& axes)
{
    std::vector<std::vector<std::string>> points = {{}};
    for (const auto& axis : axes) {
        std::vector<std::vector<std::string>> next;
        next.reserve(points.size() * axis.values.size());
        for (const auto& prefix : points) {
            for (const auto& value : axis.values) {
                auto point = prefix;
                point.push_back(value);
                next.push_back(std::move(point));
            }
        }
        points = std::move(next);
    }
    return points;
}

std::string SweepResult::csv() const
{
    std::ostringstream os;
    os << "run_id";
    for (const auto& k : axis_keys) os << ',' << k;
    for (const auto& c : sweep_csv_header()) os << ',' << c;
    os << '\n';
    const std::size_t blanks = sweep_csv_header().size() - 2;  // everything between exit_code and error
    for (const auto& row : rows) {
        os << row.run_id;
        for (const auto& v : row.values) os << ',' << csv_quote(v);
        os << ',' << row.exit_code;
        for (std::size_t k = 0; k < blanks; ++k) {
            os << ',' << (k < row.fields.size() ? csv_quote(row.fields[k]) : std::string());
        }
        os << ',' << csv_quote(row.error) << '\n';
    }
    return os.str();
}

SweepResult run_sweep(const ScenarioConfig& cfg, bool write_outputs)
{
    SweepResult result;
    for (const auto& axis : cfg.sweep_axes) {
        result.axis_keys.push_back(axis.key);
    }
    const auto points = sweep_points(cfg.sweep_axes);
    if (static_cast<long long>(points.size()) > cfg.sweep_cap) {
        throw ConfigError("sweep.cap", 0,
                          "sweep has " + std::to_string(points.size()) + " points, more than the cap of " +
                              std::to_string(cfg.sweep_cap));
    }
    result.rows.resize(points.size());

    auto run_one = [&](std::size_t k) {
        SweepRow& row = result.rows[k];
        row.run_id = static_cast<int>(k);
        row.values = points[k];
        ScenarioConfig run_cfg = cfg;
        run_cfg.sweep_axes.clear();
        char name[32];
        std::snprintf(name, sizeof name, "run_%04zu", k);
        run_cfg.output_dir = (std::filesystem::path(cfg.output_dir) / name).string();
        try {
            for (std::size_t a = 0; a < cfg.sweep_axes.size(); ++a) {
                apply_setting(run_cfg, cfg.sweep_axes[a].key, points[k][a]);
            }
            validate_config(run_cfg);
        } catch (const InvalidArgument& e) {
            row.exit_code = exit_usage;
            row.error = e.what();
            return;
        }
        try {
            const ScenarioResult r = run_scenario(run_cfg, write_outputs);
            row.exit_code = r.exit_code;
            row.fields = summary_fields(r);
            row.error = r.trajectory.message;
        } catch (const std::exception& e) {
            row.exit_code = exit_numerical;
            row.error = e.what();
        }
    };

    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.max_parallel), points.size());
    if (workers <= 1) {
        for (std::size_t k = 0; k < points.size(); ++k) run_one(k);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < points.size(); k = next++) run_one(k);
            });
        }
        for (auto& t : pool) t.join();
    }

    if (write_outputs) {
        std::filesystem::create_directories(cfg.output_dir);
        std::ofstream out(std::filesystem::path(cfg.output_dir) / "sweep.csv");
        if (!out) {
            throw Error("cannot write sweep.csv under " + cfg.output_dir);
        }
        out << result.csv();
    }
    return result;
}

}  // namespace angio::harness
