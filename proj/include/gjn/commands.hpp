#pragma once

#include <ostream>

#include "gjn/run_config.hpp"

namespace gjn {

enum ExitCode : int { kExitOk = 0, kExitMalformed = 1, kExitValidation = 2, kExitNonConvergence = 3 };

/// Runs one resolved configuration, writing manifest.json, results.json and
/// CSV tables under cfg.out. Diagnostics go to `log`. Never throws; errors
/// map onto the exit codes above.
int run_command(const RunConfig& cfg, std::ostream& log);

}  // namespace gjn
