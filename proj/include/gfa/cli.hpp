#pragma once

#include <string>
#include <vector>

namespace gfa {

// Full command-line entry point (argv-style, excluding the program
// name is fine too; CLI11 handles both). Returns the process exit code:
// 0 success, 2 modeled outcome (infeasible/unstable/...), 1 usage or
// internal error.
int run_cli(const std::vector<std::string>& args);

int run_cli(int argc, char** argv);

}  // namespace gfa
