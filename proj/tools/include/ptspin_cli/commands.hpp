// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "ptspin_cli/config.hpp"

namespace ptspin::cli {

enum ExitCode : int { kExitOk = 0, kExitInternal = 1, kExitInfeasible = 2 };

const std::vector<std::string>& command_names();

/// Runs one subcommand, writing its tables under config.out_dir and the names of the
/// written files to log. Every exception is mapped to an exit status; diagnostics go to err.
int run(const std::string& command, const RunConfig& config, std::ostream& log,
        std::ostream& err);

}  // namespace ptspin::cli
