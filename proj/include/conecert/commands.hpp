#pragma once

#include "conecert/config.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace conecert {

enum ExitCode : int { exit_all_pass = 0, exit_some_fail = 1, exit_inconclusive = 2, exit_config_error = 3 };

struct CommandOptions {
    std::optional<std::size_t> oracle_n;
    std::optional<std::size_t> grid_n;
    /// Report goes to <out>/report.json and CSVs into <out>.
    std::optional<std::string> out_dir;
    std::vector<std::string> seed_list;
    /// Wall-clock timings make reports non-reproducible, so they are opt-in.
    bool timings = false;
};

struct CommandResult {
    int exit_code = exit_config_error;
    /// Empty object when the config could not be loaded.
    Json report = Json::object();
    std::string message;
};

CommandResult run_verify(const RunConfig& cfg, const CommandOptions& opts);
/// Solutions are returned in the report; CSV text is written by cmd_solve.
CommandResult run_solve(const RunConfig& cfg, const CommandOptions& opts, std::vector<Solution>* found = nullptr);
CommandResult run_rcd(const RunConfig& cfg, const CommandOptions& opts);

/// Load the config, run, and write the report (to --out, output.report,
/// or stdout). Every error maps to exit code 3 with a message.
CommandResult cmd_verify(const std::string& config_path, const CommandOptions& opts);
CommandResult cmd_solve(const std::string& config_path, const CommandOptions& opts);
CommandResult cmd_rcd(const std::string& config_path, const CommandOptions& opts);

} // namespace conecert
