#pragma once

#include <string>
#include <vector>

namespace swapgame {

/// Outcome of one command-line invocation.  exit_code follows the contract:
/// 0 success, 2 invalid configuration or violated contract assumption,
/// 3 solver non-convergence, 4 Monte Carlo verification failure.
struct CliResult {
  int exit_code = 0;
  std::string out;  ///< payload: key-value lines or a CSV table
  std::string err;  ///< diagnostics
};

/// Runs `swapgame <command> --config <path> [--seed N] [--out <path>]`
/// in-process; args excludes the program name.  Commands: calibrate,
/// thresholds, curve, premium, sweep-p, sweep-gamma, verify.  The payload
/// always lands in CliResult::out; when an output path is set (config or
/// --out) it is also written there atomically (temp file + rename), so a
/// rerun with the same inputs produces a byte-identical file.
CliResult run_cli(const std::vector<std::string>& args);

}  // namespace swapgame
