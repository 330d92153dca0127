#pragma once

#include <string>
#include <vector>

namespace sc {

/// Runs the command-line front end. Exit codes: 0 success, 1 configuration or
/// validation error (report on stderr), 2 verification-suite failure (failing
/// checks listed on stdout).
int run_cli(const std::vector<std::string>& args);

}  // namespace sc
