#pragma once

#include "lagflow/config.hpp"

namespace lagflow {

/// Execute a configured run, writing its artifacts into out_dir.
/// Exit status: 0 when the run converged and every monitor flag passed,
/// 1 on non-convergence or audit failure.  Configuration and input errors
/// throw (the CLI maps them to status 2).
int run_config(const RunConfig& cfg, const std::string& out_dir);

}  // namespace lagflow
