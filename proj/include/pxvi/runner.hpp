#pragma once

#include "pxvi/config.hpp"

#include <map>
#include <string>

namespace pxvi {

/// Outcome of one subcommand: artifacts are staged in memory and only reach
/// disk when the status is zero.
struct RunResult {
    int status{0};
    std::map<std::string, std::string> artifacts; // filename -> content
    std::string message;
};

/// Dispatch a subcommand (solve, chain, verify, sweep, selftest) on a parsed
/// config. Exceptions are mapped to the exit-code taxonomy: 2 config,
/// 3 solver, 4 invariant.
RunResult run_subcommand(const std::string& cmd, const RunConfig& cfg);

/// Write staged artifacts under out_dir, creating it if needed.
void write_artifacts(const RunResult& result, const std::string& out_dir);

/// Full CLI entry: parse flags, load config, dispatch, write artifacts.
int run_cli(int argc, char** argv);

} // namespace pxvi
