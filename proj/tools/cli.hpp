#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace angio::cli {

/// Runs the angio command line with args (without the program name).
/// Returns the process exit code: 0 success, 1 usage/config error or failed verification,
/// 2 blow-up detected, 3 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace angio::cli
