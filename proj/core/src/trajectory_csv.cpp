#include "angio/trajectory_csv.hpp"

#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "angio/errors.hpp"
#include "angio/grid.hpp"

namespace angio {

const std::vector<std::string>& trajectory_csv_columns()
{
    static const std::vector<std::string> columns = {
        "t",           "mass_u", "mass_v", "linf_u",            "linf_v", "l2_u_dev", "l2_v_dev",
        "l2_grad_v", "linf_grad_w", "F1",     "F2",     "elliptic_residual", "min_u",  "min_v"};
    return columns;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj)
{
    const auto& cols = trajectory_csv_columns();
    for (std::size_t k = 0; k < cols.size(); ++k) {
        os << (k ? "," : "") << cols[k];
    }
    os << '\n';
    for (const auto& r : traj.records) {
        const double row[] = {r.t,       r.mass_u,      r.mass_v, r.linf_u, r.linf_v,
                              r.l2_u_dev, r.l2_v_dev,   r.l2_grad_v, r.linf_grad_w, r.F1,
                              r.F2,      r.elliptic_residual, r.min_u, r.min_v};
        for (std::size_t k = 0; k < std::size(row); ++k) {
            os << (k ? "," : "") << format_real(row[k]);
        }
        os << '\n';
    }
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj)
{
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open " + path + " for writing");
    }
    write_trajectory_csv(out, traj);
    if (!out) {
        throw Error("write to " + path + " failed");
    }
}

int CsvTable::find(const std::string& name) const
{
    for (std::size_t k = 0; k < columns.size(); ++k) {
        if (columns[k] == name) {
            return static_cast<int>(k);
        }
    }
    return -1;
}

std::vector<double> CsvTable::column(const std::string& name) const
{
    const int k = find(name);
    if (k < 0) {
        std::string available;
        for (const auto& c : columns) {
            available += (available.empty() ? "" : ", ") + c;
        }
        throw InvalidArgument("no column '" + name + "'; available columns: " + available);
    }
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        out.push_back(row[static_cast<std::size_t>(k)]);
    }
    return out;
}

namespace {

std::vector<std::string> split_commas(const std::string& line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    return out;
}

}  // namespace

CsvTable read_csv_table(std::istream& is)
{
    CsvTable table;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#' || line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        auto cells = split_commas(line);
        if (table.columns.empty()) {
            table.columns = std::move(cells);
            continue;
        }
        if (cells.size() != table.columns.size()) {
            throw InvalidArgument("line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(table.columns.size()) + " fields, got " +
                                  std::to_string(cells.size()));
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) {
            char* end = nullptr;
            const double x = std::strtod(c.c_str(), &end);
            if (c.empty() || *end != '\0') {
                throw InvalidArgument("line " + std::to_string(line_no) + ": '" + c + "' is not a number");
            }
            row.push_back(x);
        }
        table.rows.push_back(std::move(row));
    }
    if (table.columns.empty()) {
        throw InvalidArgument("CSV has no header row");
    }
    return table;
}

CsvTable read_csv_table(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("cannot open " + path);
    }
    return read_csv_table(in);
}

}  // namespace angio
