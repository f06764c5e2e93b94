// cli.hpp — Batch commands behind the sbm-tcl executable. Exposed as library
// functions so tests can drive them in-process. Exit codes: 0 success,
// 2 validation/configuration error, 3 numerical error.

#pragma once

#include <optional>
#include <string>

#include "sbmtcl/run_config.hpp"

namespace sbmtcl::cli {

inline constexpr const char* kVersion = "0.1.0";

int cmd_steady(const RunConfig& cfg, const std::string& out_path);
int cmd_dynamics(const RunConfig& cfg, const std::string& out_path);
int cmd_sweep(const RunConfig& cfg, const std::string& out_path);

// Parse the config, apply overrides, dispatch, and map exceptions to exit
// codes (messages go to stderr).
int run_command(const std::string& command, const std::string& config_path,
                const std::string& out_override, std::optional<double> rel_tol_override);

} // namespace sbmtcl::cli
