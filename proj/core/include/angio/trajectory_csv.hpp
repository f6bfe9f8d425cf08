#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "angio/model.hpp"

namespace angio {

/// t,mass_u,mass_v,linf_u,linf_v,l2_u_dev,l2_v_dev,l2_grad_v,linf_grad_w,F1,F2,elliptic_residual,min_u,min_v
const std::vector<std::string>& trajectory_csv_columns();

/// One header row, then one row per record with 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

/// A numeric CSV with a single header row. Lines starting with '#' are skipped;
/// "nan" and "inf" parse as such.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    /// Index of the named column or -1.
    int find(const std::string& name) const;
    /// Throws InvalidArgument naming the available columns when absent.
    std::vector<double> column(const std::string& name) const;
};

CsvTable read_csv_table(std::istream& is);
CsvTable read_csv_table(const std::string& path);

}  // namespace angio
