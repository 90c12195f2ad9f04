// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace chipforge {

struct RunResult {
    int exit_code = -1;
    bool timed_out = false;
    bool spawn_failed = false; // binary missing or not executable
    std::string output;        // stdout and stderr interleaved
    std::string error;         // spawn failure description
};

/// Run argv[0] with the given arguments in `cwd`, killing the whole process
/// group once `timeout_s` of wall-clock time passes. Output is capped at a
/// few megabytes; overflow is dropped with a marker line.
RunResult run_command(const std::vector<std::string>& argv, const std::string& cwd,
                      double timeout_s);

} // namespace chipforge
